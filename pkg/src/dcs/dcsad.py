"""Density contrast under average degree: greedy peeling and DCSGreedy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyGraph, UndefinedGap
from .graph import (
    as_graph,
    average_degree_diff,
    connected_components,
    edge_density_diff,
    is_positive_clique,
)
from .pqueue import make_pq

MAX_EDGE = "max-edge"
GREEDY_GD = "greedy-on-G_D"
GREEDY_GPLUS = "greedy-on-G_D+"
COMPONENT = "component-refined"
SINGLE = "single-vertex"


@dataclass(frozen=True)
class SubsetResult:
    vertices: tuple
    density: float
    ratio_beta: float | None
    is_connected: bool
    is_positive_clique: bool
    provenance: str

    def to_json(self, g):
        g = as_graph(g)
        return {
            "vertices": [g.labels[u] for u in self.vertices],
            "avg_degree_diff": self.density,
            "edge_density_diff": edge_density_diff(g, self.vertices),
            "ratio_beta": self.ratio_beta,
            "is_connected": self.is_connected,
            "is_positive_clique": self.is_positive_clique,
            "provenance": self.provenance,
        }


def peel_order(g, backend="heap"):
    """Run the peeling and return ``(order, best_k)``.

    ``order`` lists vertices in removal order; the best set is
    ``order[best_k:]``.  The best prefix is replaced only on strict
    improvement, so among equal densities the earliest (largest) set wins.
    """
    g = as_graph(g)
    n = g.n
    if n == 0:
        raise EmptyGraph("cannot peel an empty graph")
    ptr, ind, wt = g.lists
    rows = np.repeat(np.arange(n), np.diff(g.indptr))
    deg = np.bincount(rows, weights=g.weights, minlength=n).tolist()
    total = math.fsum(deg)
    pq = make_pq(deg, backend)
    alive = [True] * n
    order = []
    best_density = total / n
    best_k = 0
    size = n
    for step in range(n):
        if step and total / size > best_density:
            best_density = total / size
            best_k = step
        i, di = pq.pop()
        alive[i] = False
        order.append(i)
        total -= 2.0 * di
        size -= 1
        for k in range(ptr[i], ptr[i + 1]):
            v = ind[k]
            if alive[v]:
                deg[v] -= wt[k]
                pq.update(v, deg[v])
    return order, best_k


def greedy_peel(g, backend="heap"):
    """Greedy min-degree peeling; returns the densest prefix as a sorted list."""
    order, best_k = peel_order(g, backend)
    return sorted(order[best_k:])


def max_positive_edge(g):
    """Endpoints of the heaviest positive edge, ties to the smallest (u, v)."""
    g = as_graph(g)
    best = None
    for u, v, w in g.edges():
        if w > 0 and (best is None or w > best[2]):
            best = (u, v, w)
    return best


def dcs_greedy(dg, backend="heap"):
    """DCSGreedy: best of max-edge / Greedy(G_D) / Greedy(G_D+), component-refined.

    Returns a :class:`SubsetResult` with the data-dependent ratio
    ``beta = 2 * rho_{D+}(S2) / rho_D(S)`` when the optimum is positive.
    """
    gd = dg.gd
    if gd.n == 0:
        raise EmptyGraph("difference graph has no vertices")
    if gd.m_pos == 0:
        return SubsetResult((0,), 0.0, None, True, True, SINGLE)
    gplus = dg.gplus
    u, v, _ = max_positive_edge(gd)
    s0 = [u, v]
    s1 = greedy_peel(gd, backend)
    s2 = greedy_peel(gplus, backend)
    candidates = [(s0, MAX_EDGE), (s1, GREEDY_GD), (s2, GREEDY_GPLUS)]
    best, provenance = candidates[0]
    best_density = average_degree_diff(gd, best)
    for cand, name in candidates[1:]:
        d = average_degree_diff(gd, cand)
        if d > best_density:
            best, provenance, best_density = cand, name, d
    comps = connected_components(gd, best)
    if len(comps) > 1:
        best = comps[0]
        best_density = average_degree_diff(gd, best)
        for comp in comps[1:]:
            d = average_degree_diff(gd, comp)
            if d > best_density:
                best, best_density = comp, d
        provenance = COMPONENT
    best = tuple(sorted(best))
    beta = 2.0 * average_degree_diff(gplus, s2) / best_density if best_density > 0 else None
    return SubsetResult(
        vertices=best,
        density=best_density,
        ratio_beta=beta,
        is_connected=True,
        is_positive_clique=is_positive_clique(gd, best),
        provenance=provenance,
    )


def oracle_gap(gd, result, oracle_density):
    """Observed optimality gap ``oracle / heuristic``; never exceeds beta.

    ``gd`` is the graph both numbers were computed on; the heuristic density
    is re-evaluated on it so a result from another graph is caught.
    """
    if not result.density > 0:
        raise UndefinedGap("gap is undefined for a nonpositive density")
    density = average_degree_diff(gd, result.vertices)
    if abs(density - result.density) > 1e-9 * max(1.0, abs(density)):
        raise ValueError("result does not belong to this graph")
    return oracle_density / result.density
