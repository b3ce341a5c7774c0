import io
import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import assume, given, settings

from conftest import dense_f
from dcs.dcsad import dcs_greedy, greedy_peel, max_positive_edge
from dcs.dcsga import (
    Embedding,
    SolverConfig,
    SolverStats,
    _expansion,
    kkt_residual,
    new_sea,
    smart_init_order,
    two_coord_update,
)
from dcs.graph import (
    DifferenceGraph,
    WeightedGraph,
    average_degree_diff,
    build_difference,
    connected_components,
    core_numbers,
    dense_matrix,
    dumps_edge_list,
    flip_signs,
    is_positive_clique,
    load_edge_list,
)
from dcs.oracle import maximal_cliques, oracle_clique_affinity, oracle_dcsad, oracle_dcsga

weights = st.floats(-5, 5, allow_nan=False).filter(lambda w: w != 0)


@st.composite
def graphs(draw, max_n=8, w=weights):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    ws = [draw(w) for _ in chosen]
    labels = [f"n{i}" for i in range(n)]
    return WeightedGraph.from_edges(
        labels, [u for u, _ in chosen], [v for _, v in chosen], ws
    )


@st.composite
def simplex_points(draw, n):
    raw = draw(st.lists(st.floats(0, 1), min_size=n, max_size=n))
    assume(sum(raw) > 1e-3)
    total = math.fsum(raw)
    x = {u: r / total for u, r in enumerate(raw) if r / total > 0}
    # renormalise so the sum is exact enough for validation
    s = math.fsum(x.values())
    return {u: v / s for u, v in x.items()}


@given(graphs())
def test_round_trip(g):
    # isolated vertices have no line, so compare edge for edge
    back = load_edge_list(io.StringIO(dumps_edge_list(g)))
    def canon(h):
        return {frozenset(k): w for k, w in h.labelled_edges().items()}

    assert canon(back) == canon(g)


@given(graphs())
def test_csr_invariants(g):
    mat = dense_matrix(g)
    assert np.array_equal(mat, mat.T)
    assert np.all(np.diag(mat) == 0)
    for u in range(g.n):
        nbrs = [v for v, _ in g.neighbors(u)]
        assert nbrs == sorted(set(nbrs))
    assert g.positive_part().m == g.m_pos


@given(graphs(max_n=6), graphs(max_n=6), st.sampled_from([0.5, 1.0, 2.0]))
def test_difference_matches_dense(g1, g2, alpha):
    dg = build_difference(g1, g2, alpha)
    # labels are shared by construction (n0, n1, ...)
    m1 = np.zeros((dg.n, dg.n))
    m2 = np.zeros((dg.n, dg.n))
    idx = dg.gd.label_index
    for g, m in ((g1, m1), (g2, m2)):
        for (a, b), w in g.labelled_edges().items():
            m[idx[a], idx[b]] = m[idx[b], idx[a]] = w
    assert np.array_equal(dense_matrix(dg.gd), m2 - alpha * m1)


@given(graphs())
def test_flip_involution(g):
    dg = DifferenceGraph(g)
    assert flip_signs(flip_signs(dg)).gd == g


@given(graphs(max_n=7), st.data())
def test_gradient_finite_difference(g, data):
    x = data.draw(simplex_points(g.n))
    emb = Embedding(g, x)
    vec = np.array([x.get(u, 0.0) for u in range(g.n)])
    mat = dense_matrix(g)
    h = 1e-6
    for u in range(g.n):
        e = np.zeros(g.n)
        e[u] = h
        fd = ((vec + e) @ mat @ (vec + e) - (vec - e) @ mat @ (vec - e)) / (2 * h)
        assert emb.gradient(u) == pytest.approx(fd, abs=1e-6)


@given(graphs(max_n=7), st.data())
def test_two_coord_monotone(g, data):
    assume(g.n >= 2)
    x = data.draw(simplex_points(g.n))
    i = data.draw(st.sampled_from(sorted(x)))
    j = data.draw(st.integers(0, g.n - 1).filter(lambda v: v != i))
    before = dense_f(g, x)
    new = two_coord_update(g, x, i, j)
    assert dense_f(g, new.x) >= before - 1e-12
    assert math.fsum(new.x.values()) == pytest.approx(1.0, abs=1e-12)
    assert all(v > 0 for v in new.x.values())
    # only the pair moved
    for u in set(x) | set(new.x):
        if u not in (i, j):
            assert new.x.get(u) == x.get(u)


@given(graphs(max_n=7), st.data())
def test_expansion_improves(g, data):
    x = data.draw(simplex_points(g.n))
    emb = Embedding(g, x)
    new = _expansion(emb, 1e-2, SolverStats())
    if new is not None:
        assert dense_f(g, new.x) > dense_f(g, x)
        assert math.fsum(new.x.values()) == pytest.approx(1.0, abs=1e-12)
        assert all(v > 0 for v in new.x.values())


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=8))
def test_dcs_greedy_certificate(g):
    dg = DifferenceGraph(g)
    res = dcs_greedy(dg)
    opt = oracle_dcsad(g).optimum_value
    assert res.density == pytest.approx(average_degree_diff(g, res.vertices), abs=1e-9)
    assert res.density <= opt + 1e-9
    assert len(connected_components(g, res.vertices)) == 1
    if g.m_pos:
        assert res.density >= max_positive_edge(g)[2] - 1e-9
    if res.density > 0:
        assert opt <= res.ratio_beta * res.density + 1e-9
        assert res.ratio_beta >= 1 - 1e-12


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=8, w=st.floats(0.01, 5)))
def test_peel_two_approx(g):
    s = greedy_peel(g)
    assert average_degree_diff(g, s) >= 0.5 * oracle_dcsad(g).optimum_value - 1e-9


@given(graphs(max_n=8))
def test_component_refinement_never_worse(g):
    s = list(range(g.n))
    best = max(average_degree_diff(g, c) for c in connected_components(g, s))
    assert best >= average_degree_diff(g, s) - 1e-9


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=8))
def test_new_sea_certificates(g):
    res = new_sea(DifferenceGraph(g))
    assert res.value <= oracle_dcsga(g).optimum_value + 1e-9
    assert res.is_positive_clique
    assert is_positive_clique(g, res.support)
    assert res.kkt_residual <= 1e-2 / len(res.support)
    assert res.value == pytest.approx(dense_f(g, res.embedding.x), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=8))
def test_new_sea_monotone_audit(g):
    stats = SolverStats(audit=True)
    new_sea(DifferenceGraph(g), SolverConfig(audit=True), stats)
    assert stats.monotone_violations == 0


def _naive_cores(g):
    core = [0] * g.n
    k = 0
    while True:
        k += 1
        alive = set(range(g.n))
        changed = True
        while changed:
            changed = False
            for u in list(alive):
                if sum(1 for v, _ in g.neighbors(u) if v in alive) < k:
                    alive.discard(u)
                    changed = True
        if not alive:
            return core
        for u in alive:
            core[u] = k


@given(graphs(max_n=9))
def test_core_numbers_match_naive(g):
    assert core_numbers(g) == _naive_cores(g)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7, w=st.floats(0.01, 5)))
def test_smart_bound(g):
    mu = {b.vertex: b.mu_u for b in smart_init_order(DifferenceGraph(g))}
    for clique in maximal_cliques(g):
        if len(clique) < 2:
            continue
        val = oracle_clique_affinity(g, clique)
        for u in clique:
            assert val <= mu[u] + 1e-9
