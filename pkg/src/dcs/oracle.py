"""Exact brute-force solvers for small instances.

Average degree: enumerate every non-empty vertex subset.  Graph affinity:
a maximiser of a quadratic over the simplex is a stationary point of the
face spanned by its support, so it suffices to solve, for every support
``S``, the linear system ``D_S x = mu 1, sum(x) = 1`` and keep the strictly
positive solutions.  Faces whose system is singular are skipped: any
stationary point they contain is matched in value by one on a smaller face.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import NotAClique, TooLarge
from .graph import as_graph, dense_matrix, is_positive_clique

POSITIVE_TOL = 1e-12
COND_LIMIT = 1e12


@dataclass(frozen=True)
class OracleResult:
    optimum_value: float
    witness: object  # tuple of vertices, or {vertex: weight}
    instances_enumerated: int
    skipped_faces: int = 0


def _subset_masks(n):
    codes = np.arange(1, 2**n, dtype=np.int64)
    return (codes[:, None] >> np.arange(n, dtype=np.int64)) & 1


def oracle_dcsad(g, limit_n=15):
    """Exact max of ``W_D(S)/|S|``; witness is smallest, then lexicographic."""
    g = as_graph(g)
    n = g.n
    if n > limit_n:
        raise TooLarge(f"n={n} exceeds the enumeration limit {limit_n}")
    if n == 0:
        raise TooLarge("empty graph has no subsets")
    mat = dense_matrix(g)
    masks = _subset_masks(n).astype(np.float64)
    totals = np.einsum("ij,jk,ik->i", masks, mat, masks)
    sizes = masks.sum(axis=1)
    dens = totals / sizes
    best = float(dens.max())
    tied = np.flatnonzero(dens >= best - 1e-12 * max(1.0, abs(best)))
    witnesses = [tuple(np.flatnonzero(masks[i]).tolist()) for i in tied]
    witness = min(witnesses, key=lambda s: (len(s), s))
    return OracleResult(best, witness, len(dens))


def _face_optimum(mat, face):
    """Stationary point of xᵀDx on the relative interior of ``face``."""
    k = len(face)
    if k == 1:
        return np.ones(1), 0.0
    sub = mat[np.ix_(face, face)]
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = sub
    kkt[:k, k] = -1.0
    kkt[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    if np.linalg.cond(kkt) > COND_LIMIT:
        return None
    sol = np.linalg.solve(kkt, rhs)
    x = sol[:k]
    if np.any(x <= POSITIVE_TOL):
        return np.empty(0), None
    return x, float(x @ sub @ x)


def _enumerate_faces(mat, faces):
    best_val = -np.inf
    best = None
    count = 0
    skipped = 0
    for face in faces:
        count += 1
        out = _face_optimum(mat, list(face))
        if out is None:
            skipped += 1
            sub = mat[np.ix_(face, face)]
            x = np.full(len(face), 1.0 / len(face))
            val = float(x @ sub @ x)
        else:
            x, val = out
            if val is None:
                continue
        if val > best_val + 1e-12:
            best_val = val
            best = {int(u): float(w) for u, w in zip(face, x)}
    return best_val, best, count, skipped


def _faces(vertices):
    for size in range(1, len(vertices) + 1):
        yield from combinations(vertices, size)


def oracle_dcsga(g, limit_n=12):
    """Exact max of xᵀDx over the simplex by face enumeration."""
    g = as_graph(g)
    n = g.n
    if n > limit_n:
        raise TooLarge(f"n={n} exceeds the enumeration limit {limit_n}")
    if n == 0:
        raise TooLarge("empty graph has no embeddings")
    mat = dense_matrix(g)
    val, witness, count, skipped = _enumerate_faces(mat, _faces(range(n)))
    return OracleResult(val, witness, count, skipped)


def oracle_clique_affinity(g, clique):
    """Exact max of xᵀDx over embeddings supported inside a positive clique."""
    g = as_graph(g)
    clique = sorted(set(clique))
    if not clique or not is_positive_clique(g, clique):
        raise NotAClique(f"{clique} is not a positive clique")
    mat = dense_matrix(g)
    val, _, _, _ = _enumerate_faces(mat, _faces(clique))
    return val


def maximal_cliques(g, positive_only=True):
    """All maximal cliques (Bron-Kerbosch with pivoting), as sorted tuples."""
    g = as_graph(g)
    adj = [set() for _ in range(g.n)]
    for u, v, w in g.edges():
        if w > 0 or not positive_only:
            adj[u].add(v)
            adj[v].add(u)
    out = []

    def expand(r, p, x):
        if not p and not x:
            out.append(tuple(sorted(r)))
            return
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(set(), set(range(g.n)), set())
    return sorted(out)


def clique_number(g):
    return max((len(c) for c in maximal_cliques(g)), default=0)
