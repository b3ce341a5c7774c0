"""Density contrast under graph affinity: maximise xᵀDx over the simplex.

The local search is shrink-and-expand.  The shrink stage runs two-coordinate
ascent (or, as a baseline, replicator dynamics) until the gradient gap on
the working set is below ``eps_scale / |S|``; the expansion stage moves mass
onto vertices whose gradient exceeds ``2 f(x)``.  A refinement pass turns
any KKT point into one supported on a positive clique, and NewSEA drives
everything from one-hot seeds ordered by an upper bound on the affinity any
positive clique through the seed can reach.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import EmptySet, NegativeWeight, NoMass, NotAKKTPoint, ZeroAffinity
from .graph import (
    DifferenceGraph,
    as_graph,
    as_weights,
    core_numbers,
    edge_density_diff,
    is_positive_clique,
    quadratic_form,
)

log = logging.getLogger(__name__)

GUARD_EPS = 1e-12
HALVINGS = 30
# weights this small with below-average gradient are dropped by the replicator
REPLICATOR_FLOOR = 1e-15


@dataclass
class SolverConfig:
    eps_scale: float = 1e-2
    max_shrink_iters: int = 200_000
    max_sea_rounds: int = 10_000
    init_policy: str = "smart"  # "smart", "all" or "given"
    seeds: tuple = ()
    max_inits: int | None = None
    parallel_inits: bool = False
    threads: int = 1
    polish_tol: float = 1e-12
    audit: bool = False
    rng_seed: int = 0

    def __post_init__(self):
        if not self.eps_scale > 0:
            raise ValueError("eps_scale must be positive")
        if self.max_shrink_iters <= 0 or self.max_sea_rounds <= 0:
            raise ValueError("iteration caps must be positive")
        if self.init_policy not in ("smart", "all", "given"):
            raise ValueError(f"unknown init policy {self.init_policy!r}")
        if self.init_policy == "given" and not self.seeds:
            raise ValueError("init_policy 'given' needs seeds")

    def tol(self, size):
        return self.eps_scale / max(size, 1)


@dataclass
class SolverStats:
    """Counters collected across a solve; ``audit`` turns on step checks."""

    audit: bool = False
    shrink_steps: int = 0
    expansions: int = 0
    expansion_errors: int = 0
    guard_rejections: int = 0
    refine_drops: int = 0
    monotone_checks: int = 0
    monotone_violations: int = 0
    violations: list = field(default_factory=list)

    def check(self, where, before, after):
        self.monotone_checks += 1
        if after < before - GUARD_EPS * max(1.0, abs(before)):
            self.monotone_violations += 1
            self.violations.append((where, before, after))

    def merge(self, other):
        for name in (
            "shrink_steps",
            "expansions",
            "expansion_errors",
            "guard_rejections",
            "refine_drops",
            "monotone_checks",
            "monotone_violations",
        ):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        self.violations.extend(other.violations)


class Embedding:
    """Sparse point on the simplex with a cache of ``(Dx)_v``.

    ``x`` holds the support only (all values > 0).  ``dx`` holds ``(Dx)_v``
    for every vertex adjacent to the support; absent vertices have zero
    gradient.  The gradient is ``2 * dx[v]``.
    """

    __slots__ = ("graph", "x", "dx", "converged")

    def __init__(self, graph, x, dx=None, converged=True):
        self.graph = graph
        self.x = x
        self.converged = converged
        if dx is None:
            self.dx = {}
            self.refresh()
        else:
            self.dx = dx

    @classmethod
    def one_hot(cls, g, u):
        return cls(as_graph(g), {u: 1.0})

    @classmethod
    def from_weights(cls, g, weights):
        g = as_graph(g)
        return cls(g, as_weights(g, weights))

    def refresh(self):
        ptr, ind, wt = self.graph.lists
        dx = {}
        for u, xu in self.x.items():
            for k in range(ptr[u], ptr[u + 1]):
                v = ind[k]
                dx[v] = dx.get(v, 0.0) + wt[k] * xu
        self.dx = dx

    def copy(self):
        return Embedding(self.graph, dict(self.x), dict(self.dx), self.converged)

    def on(self, g):
        """The same point, re-cached against another graph."""
        return Embedding(as_graph(g), dict(self.x), None, self.converged)

    @property
    def value(self):
        return math.fsum(xu * self.dx.get(u, 0.0) for u, xu in self.x.items())

    @property
    def support(self):
        return sorted(self.x)

    def gradient(self, u):
        return 2.0 * self.dx.get(u, 0.0)

    def dense(self):
        out = [0.0] * self.graph.n
        for u, xu in self.x.items():
            out[u] = xu
        return out

    def exact_value(self):
        return quadratic_form(self.graph, self.x)

    def __repr__(self):
        inner = ", ".join(f"{u}: {self.x[u]:.6g}" for u in self.support)
        return f"Embedding({{{inner}}}, f={self.value:.6g})"


def _embedding(g, x):
    g = as_graph(g)
    if isinstance(x, Embedding):
        return x if x.graph is g else x.on(g)
    return Embedding.from_weights(g, x)


# ------------------------------------------------------------- primitives


def gradient(g, x, u):
    """∂f/∂x_u = 2 (Dx)_u."""
    return _embedding(g, x).gradient(u)


def kkt_residual(g, x, s=None):
    """Largest gradient gap ``max_{x_k<1} ∇_k - min_{x_k>0} ∇_k`` over ``s``.

    ``s=None`` means all vertices (the global KKT condition).  Zero means a
    (local) KKT point; the result is clamped at zero.
    """
    emb = _embedding(g, x)
    x, dx = emb.x, emb.dx
    if s is None:
        s = dx.keys() | x.keys()
        # every other vertex has zero gradient and x = 0
        hi = 0.0 if len(s) < emb.graph.n else -math.inf
    else:
        s = set(s)
        if not s:
            raise EmptySet("vertex set is empty")
        hi = -math.inf
    lo = math.inf
    for u in s:
        grad = 2.0 * dx.get(u, 0.0)
        xu = x.get(u, 0.0)
        if xu < 1.0 and grad > hi:
            hi = grad
        if xu > 0.0 and grad < lo:
            lo = grad
    if lo == math.inf or hi == -math.inf:
        return 0.0
    return max(0.0, hi - lo)


def _move(emb, u, delta):
    """x_u += delta with the gradient cache kept in step."""
    if delta == 0.0:
        return
    ptr, ind, wt = emb.graph.lists
    dx = emb.dx
    for k in range(ptr[u], ptr[u + 1]):
        v = ind[k]
        dx[v] = dx.get(v, 0.0) + wt[k] * delta


def _set_pair(emb, i, j, new_i, c):
    x = emb.x
    old_i = x.get(i, 0.0)
    old_j = x.get(j, 0.0)
    if new_i >= c:
        new_i, new_j = c, 0.0
    elif new_i <= 0.0:
        new_i, new_j = 0.0, c
    else:
        new_j = c - new_i
    for v, val in ((i, new_i), (j, new_j)):
        if val > 0.0:
            x[v] = val
        else:
            x.pop(v, None)
    _move(emb, i, new_i - old_i)
    _move(emb, j, new_j - old_j)


def _two_coord(emb, i, j):
    """Exact maximisation over the (x_i, x_j) segment; mutates ``emb``."""
    x = emb.x
    xi = x.get(i, 0.0)
    xj = x.get(j, 0.0)
    c = xi + xj
    if not c > 0.0:
        raise NoMass(f"x_{i} + x_{j} is zero")
    dij = emb.graph.weight(i, j)
    bi = emb.dx.get(i, 0.0) - dij * xj
    bj = emb.dx.get(j, 0.0) - dij * xi
    if dij == 0.0:
        if bi > bj:
            new_i = c
        elif bi < bj:
            new_i = 0.0
        else:
            return
    else:
        big_b = dij * c + bi - bj

        def g(t):
            return -dij * t * t + big_b * t

        cands = [c, 0.0]
        r = big_b / (2.0 * dij)
        if 0.0 <= r <= c:
            cands.append(r)
        # ties go to the larger x_i
        new_i = max(cands, key=lambda t: (g(t), t))
    # at an endpoint the other coordinate must leave the support even when
    # x_i + x_j rounds to the surviving value
    if new_i >= c:
        unchanged = xj == 0.0
    elif new_i <= 0.0:
        unchanged = xi == 0.0
    else:
        unchanged = new_i == xi
    if unchanged:
        return
    _set_pair(emb, i, j, new_i, c)


def two_coord_update(g, x, i, j):
    """One two-coordinate step on (i, j); returns a new embedding."""
    if i == j:
        raise ValueError("two_coord_update needs i != j")
    emb = _embedding(g, x).copy()
    _two_coord(emb, i, j)
    return emb


def _shrink_cd(emb, s, tol, max_iters, stats):
    s = sorted(s)
    x, dx = emb.x, emb.dx
    for _ in range(max_iters):
        i = j = None
        gi = -math.inf
        gj = math.inf
        for k in s:
            d = dx.get(k, 0.0)
            xk = x.get(k, 0.0)
            if xk < 1.0 and d > gi:
                i, gi = k, d
            if xk > 0.0 and d < gj:
                j, gj = k, d
        if i is None or j is None or i == j or 2.0 * (gi - gj) <= tol:
            return True
        if stats is not None:
            stats.shrink_steps += 1
            if stats.audit:
                before = emb.exact_value()
                _two_coord(emb, i, j)
                stats.check("shrink", before, emb.exact_value())
                continue
        _two_coord(emb, i, j)
    return False


def coordinate_descent(g, x, s=None, cfg=None, tol=None, stats=None):
    """Two-coordinate ascent to a local KKT point on ``s``.

    Stops when the gradient gap on ``s`` is at most ``tol`` (default
    ``cfg.eps_scale / |s|``) or after ``cfg.max_shrink_iters`` steps, in which
    case the returned embedding has ``converged = False``.
    """
    cfg = cfg or SolverConfig()
    emb = _embedding(g, x).copy()
    s = set(emb.x) if s is None else set(s)
    if not set(emb.x) <= s:
        raise ValueError("support of x must lie inside s")
    if tol is None:
        tol = cfg.tol(len(s))
    emb.converged = _shrink_cd(emb, s, tol, cfg.max_shrink_iters, stats)
    return emb


def replicator_shrink(g, x, s=None, cfg=None, stop="gap", obj_tol=1e-6, stats=None):
    """Replicator dynamics ``x_i <- x_i (Dx)_i / xᵀDx`` on ``s``.

    Needs nonnegative weights inside ``s``.  ``stop="gap"`` uses the same
    gradient-gap test as coordinate descent; ``stop="objective"`` stops once
    an iteration improves ``f`` by less than ``obj_tol``.
    """
    cfg = cfg or SolverConfig()
    emb = _embedding(g, x).copy()
    graph = emb.graph
    s = set(emb.x) if s is None else set(s)
    ptr, ind, wt = graph.lists
    for u in s:
        for k in range(ptr[u], ptr[u + 1]):
            if wt[k] < 0 and ind[k] in s:
                raise NegativeWeight(f"negative edge ({u}, {ind[k]}) inside the working set")
    f = emb.value
    if not f > 0:
        raise ZeroAffinity("replicator dynamics need xᵀDx > 0")
    tol = cfg.tol(len(s))
    emb.converged = False
    for _ in range(cfg.max_shrink_iters):
        if stop == "gap" and kkt_residual(graph, emb, emb.x) <= tol:
            emb.converged = True
            break
        before = f
        new = {}
        for u, xu in emb.x.items():
            val = xu * emb.dx.get(u, 0.0) / f
            if val > REPLICATOR_FLOOR or (val > 0 and emb.dx.get(u, 0.0) >= f):
                new[u] = val
        total = math.fsum(new.values())
        emb.x = {u: v / total for u, v in new.items()}
        emb.refresh()
        f = emb.value
        if stats is not None:
            stats.shrink_steps += 1
            if stats.audit:
                stats.check("replicator", before, f)
        if stop == "objective" and f - before < obj_tol:
            emb.converged = True
            break
    return emb


# -------------------------------------------------------------- expansion


def _expansion(emb, shrink_tol, stats):
    """One expansion; returns the new embedding or ``None`` when converged."""
    graph = emb.graph
    x, dx = emb.x, emb.dx
    f = emb.value
    lam = 2.0 * f
    zset = []
    for v in sorted(dx):
        grad = 2.0 * dx[v]
        if v in x:
            # a support vertex above the mean means the shrink stopped short
            if grad - lam > shrink_tol:
                zset.append(v)
        elif grad > lam:
            zset.append(v)
    if not zset:
        return None
    gamma = {v: dx[v] - f for v in zset}
    s = math.fsum(gamma.values())
    zeta = math.fsum(gv * gv for gv in gamma.values())
    omega_terms = []
    for v in zset:
        for u, w in graph.neighbors(v):
            gu = gamma.get(u)
            if gu is not None:
                omega_terms.append(gamma[v] * gu * w)
    omega = math.fsum(omega_terms)
    a = f * s * s + 2.0 * s * zeta - omega
    tau = 1.0 / s if a <= 0 else min(1.0 / s, zeta / a)
    if stats is not None:
        stats.expansions += 1
    for trial in range(HALVINGS + 1):
        cand = {}
        shrink = 1.0 - tau * s
        if shrink > 1e-14:
            for u, xu in x.items():
                cand[u] = xu * shrink
        for v in zset:
            if v not in x:
                cand[v] = tau * gamma[v]
        total = math.fsum(cand.values())
        cand = {u: val / total for u, val in cand.items() if val > 0.0}
        # a full-length step can empty the old support with nothing added
        new_f = quadratic_form(graph, cand) if cand else -math.inf
        if new_f > f + GUARD_EPS:
            if stats is not None and stats.audit:
                stats.check("expand", f, new_f)
            return Embedding(graph, cand)
        if stats is not None:
            stats.guard_rejections += 1
            if trial == 0:
                stats.expansion_errors += 1
        log.debug("expansion guard rejected tau=%g (f %r -> %r)", tau, f, new_f)
        tau /= 2.0
    return None


def expansion_step(g, x, cfg=None, shrink_tol=None, stats=None):
    """Grow the support along vertices whose gradient exceeds ``2 f(x)``.

    Returns the expanded embedding, or ``None`` when there is nothing to add
    (or no improving step survived the guard), i.e. converged.
    """
    cfg = cfg or SolverConfig()
    emb = _embedding(g, x)
    if shrink_tol is None:
        shrink_tol = cfg.tol(len(emb.x))
    return _expansion(emb, shrink_tol, stats)


# ---------------------------------------------------------- SEA drivers


def _sea(graph, x0, cfg, stats, shrink="cd", stop="gap", obj_tol=1e-6):
    emb = _embedding(graph, x0).copy()
    work = set(emb.x)
    for _ in range(cfg.max_sea_rounds):
        tol = cfg.tol(len(work))
        if shrink == "cd":
            ok = _shrink_cd(emb, work, tol, cfg.max_shrink_iters, stats)
        elif len(emb.x) > 1:
            before = emb.value
            emb = replicator_shrink(graph, emb, work, cfg, stop=stop, obj_tol=obj_tol, stats=stats)
            ok = emb.converged
            if stats is not None and stats.audit:
                stats.check("shrink", before, emb.value)
        else:
            ok = True
        emb.refresh()
        if shrink == "cd" and ok and kkt_residual(graph, emb) <= cfg.tol(len(emb.x)):
            emb.converged = True
            return emb
        new = _expansion(emb, tol, stats)
        if new is None:
            emb.converged = ok
            return emb
        emb = new
        work = set(emb.x)
    emb.converged = False
    return emb


def seacd(g, x0, cfg=None, stats=None):
    """Shrink (coordinate descent) and expand until a KKT point is reached."""
    cfg = cfg or SolverConfig()
    return _sea(as_graph(g), x0, cfg, stats)


def sea(g, x0, cfg=None, stats=None, stop="objective", obj_tol=1e-6):
    """Shrink-and-expand with replicator shrink (the classical baseline)."""
    cfg = cfg or SolverConfig()
    return _sea(as_graph(g), x0, cfg, stats, shrink="replicator", stop=stop, obj_tol=obj_tol)


def _first_non_edge(graph, support):
    for a, u in enumerate(support):
        for v in support[a + 1:]:
            if not graph.weight(u, v) > 0:
                return u, v
    return None


def refine_to_clique(g, x, cfg=None, stats=None, strict=True):
    """Shrink the support of a KKT point until it is a positive clique.

    Each round takes the first support pair (u, v) without a positive edge,
    moves all of ``x_u + x_v`` onto whichever endpoint is better (``u`` on a
    tie), then re-runs coordinate descent on the smaller support.
    """
    cfg = cfg or SolverConfig()
    emb = _embedding(g, x).copy()
    graph = emb.graph
    if strict:
        res = kkt_residual(graph, emb)
        if res > cfg.tol(len(emb.x)) + GUARD_EPS:
            raise NotAKKTPoint(f"KKT residual {res:.3g} exceeds tolerance")
    while True:
        pair = _first_non_edge(graph, emb.support)
        if pair is None:
            return emb
        u, v = pair
        before = emb.exact_value() if stats is not None and stats.audit else None
        xu, xv = emb.x[u], emb.x[v]
        duv = graph.weight(u, v)
        bu = emb.dx.get(u, 0.0) - duv * xv
        bv = emb.dx.get(v, 0.0) - duv * xu
        # D(u,v) <= 0: the pair objective is linear or convex, so an endpoint wins
        keep_u = bu >= bv
        _set_pair(emb, u, v, xu + xv if keep_u else 0.0, xu + xv)
        if stats is not None:
            stats.refine_drops += 1
            if stats.audit:
                stats.check("refine", before, emb.exact_value())
        support = set(emb.x)
        _shrink_cd(emb, support, cfg.tol(len(support)), cfg.max_shrink_iters, stats)
        emb.refresh()


# ---------------------------------------------------------- initialisation


@dataclass(frozen=True)
class InitBound:
    vertex: int
    w_u: float
    tau_u: int
    mu_u: float


def smart_init_order(g):
    """Upper bounds ``mu_u = tau_u w_u / (tau_u + 1)``, largest first.

    ``w_u`` is the heaviest positive edge with an endpoint in the closed
    neighbourhood of ``u``; ``tau_u`` is the core number in the positive part.
    """
    gplus = g.gplus if isinstance(g, DifferenceGraph) else as_graph(g).positive_part()
    n = gplus.n
    ptr, ind, wt = gplus.lists
    heaviest = [max(wt[ptr[u]:ptr[u + 1]], default=0.0) for u in range(n)]
    tau = core_numbers(gplus)
    bounds = []
    for u in range(n):
        w = heaviest[u]
        for k in range(ptr[u], ptr[u + 1]):
            hv = heaviest[ind[k]]
            if hv > w:
                w = hv
        t = tau[u]
        bounds.append(InitBound(u, w, t, t * w / (t + 1)))
    bounds.sort(key=lambda b: (-b.mu_u, b.vertex))
    return bounds


# ------------------------------------------------------------------ NewSEA


@dataclass
class GAResult:
    embedding: Embedding
    value: float
    kkt_residual: float
    is_positive_clique: bool
    inits_used: int
    converged: bool
    stats: SolverStats
    best_seed: int | None = None

    @property
    def support(self):
        return self.embedding.support

    def to_json(self):
        g = self.embedding.graph
        x = self.embedding.x
        return {
            "support": [[g.labels[u], x[u]] for u in self.support],
            "affinity_diff": self.value,
            "edge_density_diff": edge_density_diff(g, self.support),
            "kkt_residual": self.kkt_residual,
            "is_positive_clique": self.is_positive_clique,
            "inits_used": self.inits_used,
            "converged": self.converged,
            "expansion_errors": self.stats.expansion_errors,
        }


def solve_seed(gplus, u, cfg, stats=None, shrink="cd", stop="gap", obj_tol=1e-6):
    """SEACD from ``e_u``, refinement, polishing; repeat until globally KKT."""
    emb = Embedding.one_hot(gplus, u)
    for _ in range(cfg.max_sea_rounds):
        emb = _sea(gplus, emb, cfg, stats, shrink=shrink, stop=stop, obj_tol=obj_tol)
        ok = emb.converged
        emb = refine_to_clique(gplus, emb, cfg, stats, strict=ok and shrink == "cd")
        before = emb.exact_value() if stats is not None and stats.audit else None
        polished = _shrink_cd(emb, set(emb.x), cfg.polish_tol, cfg.max_shrink_iters, stats)
        emb.refresh()
        if before is not None:
            stats.check("polish", before, emb.exact_value())
        if shrink != "cd":
            emb.converged = ok and polished
            return emb
        if kkt_residual(gplus, emb) <= cfg.tol(len(emb.x)):
            emb.converged = ok
            return emb
    emb.converged = False
    return emb


def _seed_order(dg, cfg):
    gd = as_graph(dg)
    if cfg.init_policy == "smart":
        return [(b.vertex, b.mu_u) for b in smart_init_order(dg)]
    if cfg.init_policy == "all":
        return [(u, math.inf) for u in range(gd.n)]
    return [(int(u), math.inf) for u in cfg.seeds]


def new_sea(dg, cfg=None, stats=None, shrink="cd", stop="gap", obj_tol=1e-6):
    """NewSEA: best positive-clique KKT point over ordered one-hot seeds.

    With the smart policy, seeds are visited by decreasing bound and the scan
    stops once a bound no longer beats the best affinity found.  ``shrink``
    selects coordinate descent (default) or the replicator baseline.
    """
    cfg = cfg or SolverConfig()
    if not isinstance(dg, DifferenceGraph):
        dg = DifferenceGraph(as_graph(dg))
    gd = dg.gd
    gplus = dg.gplus
    stats = stats if stats is not None else SolverStats(audit=cfg.audit)
    order = _seed_order(dg, cfg)
    best = None
    best_f = 0.0
    best_seed = None
    inits = 0
    all_ok = True

    def run(u):
        local = SolverStats(audit=stats.audit)
        emb = solve_seed(gplus, u, cfg, local, shrink=shrink, stop=stop, obj_tol=obj_tol)
        return emb, local

    batch = max(1, cfg.threads) if cfg.parallel_inits else 1
    pool = ThreadPoolExecutor(max_workers=batch) if batch > 1 else None
    try:
        pos = 0
        stop_scan = False
        while pos < len(order) and not stop_scan:
            chunk = order[pos:pos + batch]
            pos += len(chunk)
            if pool is not None:
                results = list(pool.map(lambda item: run(item[0]), chunk))
            else:
                results = None
            # reduce in seed order so the answer matches a sequential run
            for idx, (u, mu) in enumerate(chunk):
                if cfg.init_policy == "smart" and mu <= best_f:
                    stop_scan = True
                    break
                if cfg.max_inits is not None and inits >= cfg.max_inits:
                    stop_scan = True
                    break
                emb, local = results[idx] if results is not None else run(u)
                inits += 1
                stats.merge(local)
                all_ok = all_ok and emb.converged
                f = emb.value
                if best is None or f > best_f:
                    best, best_f, best_seed = emb, f, u
    finally:
        if pool is not None:
            pool.shutdown()
    if best is None or gd.m_pos == 0:
        best = Embedding.one_hot(gplus, 0)
        best_seed = None
    final = best.on(gd)
    final.converged = all_ok
    return GAResult(
        embedding=final,
        value=final.value,
        kkt_residual=kkt_residual(gd, final),
        is_positive_clique=is_positive_clique(gd, final.x),
        inits_used=inits,
        converged=all_ok,
        stats=stats,
        best_seed=best_seed,
    )


def sea_refine(dg, cfg=None, stats=None, stop="objective", obj_tol=1e-6):
    """Baseline: replicator shrink-and-expand plus refinement, every seed."""
    cfg = cfg or SolverConfig(init_policy="all")
    return new_sea(dg, cfg, stats, shrink="replicator", stop=stop, obj_tol=obj_tol)
