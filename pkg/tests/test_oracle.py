import pytest

from conftest import clique_text, diff
from dcs.errors import NotAClique, TooLarge
from dcs.graph import WeightedGraph
from dcs.oracle import (
    clique_number,
    maximal_cliques,
    oracle_clique_affinity,
    oracle_dcsad,
    oracle_dcsga,
)
from dcs.synth import random_signed


def test_dcsad_fixture(T):
    r = oracle_dcsad(T.gd)
    assert r.optimum_value == pytest.approx(2.0, abs=1e-12)
    assert r.witness == (0, 1)
    assert r.instances_enumerated == 7


def test_dcsad_all_negative():
    r = oracle_dcsad(diff("a b -1\nb c -1\n").gd)
    assert r.optimum_value == 0.0
    assert r.witness == (0,)


def test_dcsad_edge(edge):
    r = oracle_dcsad(edge.gd)
    assert (r.optimum_value, r.witness) == (3.0, (0, 1))


def test_dcsga_fixture(T):
    r = oracle_dcsga(T.gd)
    assert r.optimum_value == pytest.approx(1.0, abs=1e-12)
    assert r.witness == pytest.approx({0: 0.5, 1: 0.5})


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_dcsga_clique(k):
    r = oracle_dcsga(diff(clique_text(k)).gd)
    assert r.optimum_value == pytest.approx(1 - 1 / k, abs=1e-12)
    assert sorted(r.witness.values()) == pytest.approx([1 / k] * k)


def test_dcsga_single_vertex():
    assert oracle_dcsga(WeightedGraph.empty(["a"])).optimum_value == 0.0


def test_too_large():
    g = random_signed(20, rng=0).gd
    with pytest.raises(TooLarge):
        oracle_dcsad(g)
    with pytest.raises(TooLarge):
        oracle_dcsga(g)


def test_clique_affinity():
    assert oracle_clique_affinity(diff(clique_text(3)).gd, [0, 1, 2]) == pytest.approx(2 / 3)
    assert oracle_clique_affinity(diff("a b 7\n").gd, [0, 1]) == pytest.approx(3.5)
    assert oracle_clique_affinity(diff(clique_text(5, 2.5)).gd, range(5)) == pytest.approx(2.0)


def test_clique_affinity_rejects_non_clique(T):
    with pytest.raises(NotAClique):
        oracle_clique_affinity(T.gd, [0, 1, 2])


def test_maximal_cliques(T):
    assert maximal_cliques(T.gd) == [(0, 1), (1, 2)]
    assert maximal_cliques(T.gd, positive_only=False) == [(0, 1, 2)]
    assert clique_number(diff(clique_text(4) + "v0 p 1\n").gd) == 4


def test_dcsga_matches_grid_search():
    # coarse independent check: the optimum is at least any grid point's value
    import itertools

    import numpy as np

    from dcs.graph import dense_matrix

    for seed in range(10):
        g = random_signed(4, rng=seed).gd
        mat = dense_matrix(g)
        best = -np.inf
        steps = 12
        for c in itertools.product(range(steps + 1), repeat=3):
            if sum(c) <= steps:
                x = np.array(list(c) + [steps - sum(c)]) / steps
                best = max(best, x @ mat @ x)
        opt = oracle_dcsga(g).optimum_value
        assert opt >= best - 1e-9
