"""Weighted undirected graphs, difference graphs and density measures.

Vertices are dense integer ids ``0..n-1``; every graph keeps a label table so
results can be reported with the external labels read from an edge list.
Adjacency is stored CSR-style (``indptr``/``indices``/``weights`` numpy
arrays) with each row sorted by neighbour id, and both orientations of every
undirected edge present.

Average degree here always means *total degree* over the vertex count: an
undirected edge of weight ``w`` inside ``S`` contributes ``2w`` to ``W(S)``.
"""

from __future__ import annotations

import io
import math
import os
from bisect import bisect_left
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    BadEmbedding,
    BadTransform,
    BadWeight,
    DuplicateEdge,
    EmptySet,
    ParseError,
    SelfLoop,
)

SIMPLEX_TOL = 1e-12


class WeightedGraph:
    """Immutable symmetric signed-weight graph over dense vertex ids."""

    def __init__(self, labels, indptr, indices, weights):
        # trusted constructor; use from_edges / load_edge_list for validation
        self.labels = list(labels)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.weights = np.asarray(weights, dtype=np.float64)
        for arr in (self.indptr, self.indices, self.weights):
            arr.flags.writeable = False

    @classmethod
    def from_edges(cls, labels, us, vs, ws, check=True):
        """Build a graph from undirected edge arrays (one entry per edge).

        With ``check`` the usual input rules are enforced: no self loops,
        finite non-zero weights, no edge listed twice in either orientation.
        """
        labels = list(labels)
        n = len(labels)
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        ws = np.asarray(ws, dtype=np.float64)
        if check and len(us):
            loops = np.flatnonzero(us == vs)
            if len(loops):
                raise SelfLoop(int(loops[0]) + 1, f"self loop on {labels[us[loops[0]]]!r}")
            bad = np.flatnonzero(~np.isfinite(ws) | (ws == 0))
            if len(bad):
                raise BadWeight(int(bad[0]) + 1, f"invalid weight {ws[bad[0]]!r}")
            lo = np.minimum(us, vs)
            hi = np.maximum(us, vs)
            keys = lo * n + hi
            order = np.argsort(keys, kind="stable")
            dup = np.flatnonzero(keys[order][1:] == keys[order][:-1])
            if len(dup):
                k = int(order[dup[0] + 1])
                raise DuplicateEdge(k + 1, f"duplicate edge {labels[us[k]]!r} {labels[vs[k]]!r}")
        rows = np.concatenate([us, vs])
        cols = np.concatenate([vs, us])
        wts = np.concatenate([ws, ws])
        order = np.lexsort((cols, rows))
        counts = np.bincount(rows, minlength=n) if n else np.zeros(0, dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return cls(labels, indptr, cols[order], wts[order])

    @classmethod
    def empty(cls, labels=()):
        return cls.from_edges(labels, [], [], [], check=False)

    @property
    def n(self):
        return len(self.labels)

    def __len__(self):
        return self.n

    @cached_property
    def label_index(self):
        return {label: i for i, label in enumerate(self.labels)}

    @cached_property
    def m_pos(self):
        return int(np.count_nonzero(self.weights > 0)) // 2

    @cached_property
    def m_neg(self):
        return int(np.count_nonzero(self.weights < 0)) // 2

    @property
    def m(self):
        return len(self.indices) // 2

    @cached_property
    def lists(self):
        """Plain-list copies of the CSR arrays for tight Python loops."""
        return self.indptr.tolist(), self.indices.tolist(), self.weights.tolist()

    def neighbors(self, u):
        ptr, ind, wt = self.lists
        for k in range(ptr[u], ptr[u + 1]):
            yield ind[k], wt[k]

    def degree(self, u):
        ptr, _, wt = self.lists
        return math.fsum(wt[ptr[u]:ptr[u + 1]])

    def weight(self, u, v):
        """D(u, v), zero when the edge is absent."""
        ptr, ind, wt = self.lists
        lo, hi = ptr[u], ptr[u + 1]
        k = bisect_left(ind, v, lo, hi)
        if k < hi and ind[k] == v:
            return wt[k]
        return 0.0

    def edge_arrays(self):
        """Undirected edges as ``(us, vs, ws)`` with ``u < v``, sorted."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        keep = rows < self.indices
        return rows[keep], self.indices[keep], self.weights[keep]

    def edges(self):
        us, vs, ws = self.edge_arrays()
        return list(zip(us.tolist(), vs.tolist(), ws.tolist()))

    def labelled_edges(self):
        return {(self.labels[u], self.labels[v]): w for u, v, w in self.edges()}

    def ids(self, labels):
        index = self.label_index
        return [index[label] for label in labels]

    def positive_part(self):
        us, vs, ws = self.edge_arrays()
        keep = ws > 0
        return WeightedGraph.from_edges(self.labels, us[keep], vs[keep], ws[keep], check=False)

    def negative_part(self):
        """The negative edges with their magnitudes (a nonnegative graph)."""
        us, vs, ws = self.edge_arrays()
        keep = ws < 0
        return WeightedGraph.from_edges(self.labels, us[keep], vs[keep], -ws[keep], check=False)

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.labels == other.labels
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m+={self.m_pos}, m-={self.m_neg})"


def as_graph(g):
    """Accept either a DifferenceGraph or a WeightedGraph."""
    return g.gd if isinstance(g, DifferenceGraph) else g


@dataclass(frozen=True)
class GraphStats:
    n: int
    m_pos: int
    m_neg: int
    max_w: float
    min_w: float
    avg_w: float

    def line(self):
        return (
            f"n={self.n}  m+={self.m_pos}  m-={self.m_neg}  "
            f"max_w={self.max_w:.6g}  min_w={self.min_w:.6g}  avg_w={self.avg_w:.6g}"
        )

    def as_dict(self):
        return {
            "n": self.n,
            "m_pos": self.m_pos,
            "m_neg": self.m_neg,
            "max_w": self.max_w,
            "min_w": self.min_w,
            "avg_w": self.avg_w,
        }


def graph_stats(g):
    g = as_graph(g)
    _, _, ws = g.edge_arrays()
    if len(ws) == 0:
        return GraphStats(g.n, 0, 0, 0.0, 0.0, 0.0)
    return GraphStats(
        n=g.n,
        m_pos=g.m_pos,
        m_neg=g.m_neg,
        max_w=float(ws.max()),
        min_w=float(ws.min()),
        avg_w=math.fsum(ws.tolist()) / len(ws),
    )


@dataclass(frozen=True)
class DifferenceGraph:
    """The signed graph ``D = A2 - alpha * A1`` and its positive part."""

    gd: WeightedGraph
    alpha: float = 1.0

    @cached_property
    def gplus(self):
        return self.gd.positive_part()

    @cached_property
    def stats(self):
        return graph_stats(self.gd)

    @property
    def n(self):
        return self.gd.n

    @property
    def labels(self):
        return self.gd.labels


# ---------------------------------------------------------------- edge lists


def _open_text(source):
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="utf-8"), True
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8")), True
    if isinstance(source, io.TextIOBase):
        return source, False
    # binary file object
    return io.TextIOWrapper(source, encoding="utf-8"), False


def load_edge_list(source):
    """Read ``u v w`` lines into a WeightedGraph.

    ``source`` may be a path, raw bytes or an open (text or binary) stream.
    ``#`` starts a comment; blank lines are ignored.  Labels are assigned
    dense ids in order of first appearance.
    """
    stream, owned = _open_text(source)
    index = {}
    labels = []
    us, vs, ws = [], [], []
    seen = set()
    try:
        for line_no, raw in enumerate(stream, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 3:
                raise ParseError(line_no, f"expected 'u v w', got {raw.strip()!r}")
            a, b, w_text = parts
            try:
                w = float(w_text)
            except ValueError:
                raise ParseError(line_no, f"weight {w_text!r} is not a number") from None
            if a == b:
                raise SelfLoop(line_no, f"self loop on {a!r}")
            if not math.isfinite(w) or w == 0.0:
                raise BadWeight(line_no, f"invalid weight {w_text!r}")
            for label in (a, b):
                if label not in index:
                    index[label] = len(labels)
                    labels.append(label)
            u, v = index[a], index[b]
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DuplicateEdge(line_no, f"duplicate edge {a!r} {b!r}")
            seen.add(key)
            us.append(u)
            vs.append(v)
            ws.append(w)
    finally:
        if owned:
            stream.close()
    return WeightedGraph.from_edges(labels, us, vs, ws, check=False)


def format_weight(w):
    return "%.17g" % w


def write_edge_list(g, dest):
    """Write one ``u v w`` line per undirected edge, lower id first."""
    g = as_graph(g)
    labels = g.labels
    lines = [
        f"{labels[u]} {labels[v]} {format_weight(w)}\n" for u, v, w in g.edges()
    ]
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8") as fh:
            fh.writelines(lines)
    else:
        dest.writelines(lines)


def dumps_edge_list(g):
    buf = io.StringIO()
    write_edge_list(g, buf)
    return buf.getvalue()


# ------------------------------------------------------- difference graphs


def _remap(g, index):
    us, vs, ws = g.edge_arrays()
    table = np.array([index[label] for label in g.labels], dtype=np.int64)
    return table[us], table[vs], ws


def build_difference(g1, g2, alpha=1.0):
    """Difference graph ``D(u,v) = A2(u,v) - alpha * A1(u,v)``.

    The vertex set is the union of both label tables (labels of ``g1`` first,
    then new labels of ``g2``).  Pairs whose difference is exactly zero are
    not stored.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    labels = list(g1.labels)
    index = {label: i for i, label in enumerate(labels)}
    for label in g2.labels:
        if label not in index:
            index[label] = len(labels)
            labels.append(label)
    n = len(labels)
    u1, v1, w1 = _remap(g1, index)
    u2, v2, w2 = _remap(g2, index)
    us = np.concatenate([u2, u1])
    vs = np.concatenate([v2, v1])
    ws = np.concatenate([w2, -(alpha * w1)])
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    keys, inverse = np.unique(lo * max(n, 1) + hi, return_inverse=True)
    # two terms at most per key, so the sum is the correctly rounded difference
    merged = np.bincount(inverse, weights=ws, minlength=len(keys))
    keep = merged != 0.0
    keys = keys[keep]
    gd = WeightedGraph.from_edges(
        labels, keys // max(n, 1), keys % max(n, 1), merged[keep], check=False
    )
    return DifferenceGraph(gd, alpha)


def difference_from_graph(g, alpha=1.0):
    """Wrap an already-signed graph (e.g. read from a diff file)."""
    return DifferenceGraph(g, alpha)


@dataclass(frozen=True)
class Band:
    """Weights above ``lower`` (or equal, if ``inclusive``) map to ``value``."""

    lower: float
    value: float
    inclusive: bool = True

    def admits(self, w):
        return w >= self.lower if self.inclusive else w > self.lower


@dataclass(frozen=True)
class WeightTransform:
    """Edge-weight mapping: ``identity``, ``clamp_max`` or ``discretize``.

    Discretize bands are listed in increasing order of lower bound; a weight
    maps to the value of the highest band it reaches.  Weights below every
    band map to 0 and the edge is dropped.
    """

    kind: str = "identity"
    cap: float | None = None
    bands: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in ("identity", "clamp_max", "discretize"):
            raise BadTransform(f"unknown transform {self.kind!r}")
        if self.kind == "clamp_max" and (self.cap is None or not math.isfinite(self.cap)):
            raise BadTransform("clamp_max needs a finite cap")
        if self.kind == "discretize":
            if not self.bands:
                raise BadTransform("discretize needs at least one band")
            for prev, cur in zip(self.bands, self.bands[1:]):
                if not cur.lower > prev.lower:
                    raise BadTransform(
                        f"bands overlap or are unordered at lower bound {cur.lower!r}"
                    )

    @classmethod
    def identity(cls):
        return cls("identity")

    @classmethod
    def clamp_max(cls, cap):
        return cls("clamp_max", cap=float(cap))

    @classmethod
    def discretize(cls, bands):
        return cls("discretize", bands=tuple(b if isinstance(b, Band) else Band(*b) for b in bands))

    def apply(self, ws):
        ws = np.asarray(ws, dtype=np.float64)
        if self.kind == "identity":
            return ws.copy()
        if self.kind == "clamp_max":
            return np.minimum(ws, self.cap)
        out = np.zeros_like(ws)
        for band in self.bands:
            hit = ws >= band.lower if band.inclusive else ws > band.lower
            out[hit] = band.value
        return out


# Discrete co-author setting: >=5 -> 2, [2,5) -> 1, (-4,0) -> -1, <=-4 -> -2.
DBLP_DISCRETE = WeightTransform.discretize(
    [
        Band(-math.inf, -2.0, False),
        Band(-4.0, -1.0, False),
        Band(0.0, 0.0, True),
        Band(2.0, 1.0, True),
        Band(5.0, 2.0, True),
    ]
)

PRESETS = {"dblp": DBLP_DISCRETE}


def transform_weights(dg, t):
    g = dg.gd
    us, vs, ws = g.edge_arrays()
    new = t.apply(ws)
    keep = new != 0.0
    gd = WeightedGraph.from_edges(g.labels, us[keep], vs[keep], new[keep], check=False)
    return DifferenceGraph(gd, dg.alpha)


def flip_signs(dg):
    g = dg.gd
    gd = WeightedGraph(g.labels, g.indptr, g.indices, -g.weights)
    return DifferenceGraph(gd, dg.alpha)


# ---------------------------------------------------------------- densities


def _vertex_set(g, s):
    s = set(s)
    if not s:
        raise EmptySet("vertex set is empty")
    for u in s:
        if not 0 <= u < g.n:
            raise IndexError(f"vertex id {u} out of range")
    return s


def total_degree(g, s):
    """W(S): sum of within-S degrees (each undirected edge counted twice)."""
    g = as_graph(g)
    s = _vertex_set(g, s)
    if len(s) > 256:
        mask = np.zeros(g.n, dtype=bool)
        mask[list(s)] = True
        rows = np.repeat(mask, np.diff(g.indptr))
        return math.fsum(g.weights[rows & mask[g.indices]].tolist())
    ptr, ind, wt = g.lists
    terms = []
    for u in s:
        for k in range(ptr[u], ptr[u + 1]):
            if ind[k] in s:
                terms.append(wt[k])
    return math.fsum(terms)


def average_degree_diff(g, s):
    """rho_D(S) = W_D(S) / |S|."""
    s = set(s)
    w = total_degree(g, s)
    return w / len(s)


def edge_density_diff(g, s):
    """W_D(S) / |S|^2."""
    s = set(s)
    w = total_degree(g, s)
    return w / len(s) ** 2


def as_weights(g, x):
    """Normalise an embedding-like value to a ``{vertex: weight}`` dict."""
    if hasattr(x, "x") and isinstance(getattr(x, "x"), Mapping):
        x = x.x
    if isinstance(x, Mapping):
        out = {int(u): float(w) for u, w in x.items() if w != 0}
    else:
        arr = np.asarray(x, dtype=np.float64)
        if arr.shape != (g.n,):
            raise BadEmbedding(f"dense embedding must have length {g.n}")
        out = {int(u): float(arr[u]) for u in np.flatnonzero(arr)}
    for u, w in out.items():
        if not 0 <= u < g.n:
            raise BadEmbedding(f"vertex id {u} out of range")
        if not (w > 0 and math.isfinite(w)):
            raise BadEmbedding(f"negative or invalid weight {w!r} on vertex {u}")
    total = math.fsum(out.values())
    if abs(total - 1.0) > SIMPLEX_TOL:
        raise BadEmbedding(f"weights sum to {total!r}, not 1")
    return out


def quadratic_form(g, x):
    """xᵀAx summed over ordered pairs, for a validated weight dict."""
    ptr, ind, wt = g.lists
    terms = []
    for u, xu in x.items():
        for k in range(ptr[u], ptr[u + 1]):
            xv = x.get(ind[k])
            if xv is not None:
                terms.append(xu * xv * wt[k])
    return math.fsum(terms)


def graph_affinity_diff(g, x):
    """f_D(x) = xᵀDx for an embedding on the simplex."""
    g = as_graph(g)
    return quadratic_form(g, as_weights(g, x))


# ------------------------------------------------------------- structure


def connected_components(g, s):
    """Components of the subgraph induced by ``s`` (edges of either sign)."""
    g = as_graph(g)
    s = _vertex_set(g, s)
    ptr, ind, _ = g.lists
    seen = set()
    comps = []
    for root in sorted(s):
        if root in seen:
            continue
        seen.add(root)
        comp = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for k in range(ptr[u], ptr[u + 1]):
                v = ind[k]
                if v in s and v not in seen:
                    seen.add(v)
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def is_connected(g, s):
    return len(connected_components(g, s)) == 1


def is_positive_clique(g, s):
    """Every pair in ``s`` joined by a strictly positive edge."""
    g = as_graph(g)
    s = sorted(set(s))
    for i, u in enumerate(s):
        for v in s[i + 1:]:
            if not g.weight(u, v) > 0:
                return False
    return True


def core_numbers(g):
    """Unweighted k-core numbers by bucket peeling (Batagelj-Zaversnik).

    Edge weights are ignored; pass the positive part when the signed graph
    is not what you want.  Returns a list indexed by vertex id.
    """
    g = as_graph(g)
    n = g.n
    ptr, ind, _ = g.lists
    deg = [ptr[u + 1] - ptr[u] for u in range(n)]
    if n == 0:
        return []
    max_deg = max(deg)
    bins = [0] * (max_deg + 1)
    for d in deg:
        bins[d] += 1
    start = 0
    for d in range(max_deg + 1):
        bins[d], start = start, start + bins[d]
    pos = [0] * n
    order = [0] * n
    for u in range(n):  # ascending id within each bucket
        pos[u] = bins[deg[u]]
        order[pos[u]] = u
        bins[deg[u]] += 1
    for d in range(max_deg, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0
    for i in range(n):
        u = order[i]
        du = deg[u]
        for k in range(ptr[u], ptr[u + 1]):
            v = ind[k]
            dv = deg[v]
            if dv > du:
                pv = pos[v]
                pw = bins[dv]
                w = order[pw]
                if v != w:
                    order[pv], order[pw] = w, v
                    pos[v], pos[w] = pw, pv
                bins[dv] += 1
                deg[v] = dv - 1
    return deg


def induced_subgraph_labels(g, s: Iterable[int]) -> list[str]:
    g = as_graph(g)
    return [g.labels[u] for u in sorted(s)]


def dense_matrix(g) -> np.ndarray:
    """Dense affinity matrix; intended for small graphs and oracles."""
    g = as_graph(g)
    mat = np.zeros((g.n, g.n))
    us, vs, ws = g.edge_arrays()
    mat[us, vs] = ws
    mat[vs, us] = ws
    return mat


def graph_from_dense(mat: np.ndarray, labels: Sequence[str] | None = None) -> WeightedGraph:
    mat = np.asarray(mat, dtype=np.float64)
    n = mat.shape[0]
    labels = list(labels) if labels is not None else [str(i) for i in range(n)]
    us, vs = np.nonzero(np.triu(mat, 1))
    return WeightedGraph.from_edges(labels, us, vs, mat[us, vs], check=False)
