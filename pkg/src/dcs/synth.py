"""Random and planted instances for tests and experiment scripts."""

from __future__ import annotations

import numpy as np

from .graph import DifferenceGraph, WeightedGraph


def _graph(n, us, vs, ws):
    labels = [str(i) for i in range(n)]
    return WeightedGraph.from_edges(labels, us, vs, ws, check=False)


def random_signed(n, p=0.5, low=-5.0, high=5.0, rng=None):
    """Erdos-Renyi pairs with weights uniform in [low, high]; zeros dropped."""
    rng = np.random.default_rng(rng)
    iu, iv = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    us, vs = iu[keep], iv[keep]
    ws = rng.uniform(low, high, len(us))
    nz = ws != 0
    return DifferenceGraph(_graph(n, us[nz], vs[nz], ws[nz]))


def planted_clique(k, noise_n=0, noise_p=0.1, rng=None):
    """Unit-weight k-clique on ids 0..k-1, optionally inside sparse noise.

    Noise vertices get unit edges among themselves with probability
    ``noise_p`` and every clique/noise pair gets a negative edge with the same
    probability, so the clique is the unique heaviest positive clique.
    """
    rng = np.random.default_rng(rng)
    n = k + noise_n
    us, vs, ws = [], [], []
    for i in range(k):
        for j in range(i + 1, k):
            us.append(i), vs.append(j), ws.append(1.0)
    for i in range(k, n):
        for j in range(i + 1, n):
            if rng.random() < noise_p:
                us.append(i), vs.append(j), ws.append(1.0)
    for i in range(k):
        for j in range(k, n):
            if rng.random() < noise_p:
                us.append(i), vs.append(j), ws.append(-float(rng.uniform(0.5, 2.0)))
    return DifferenceGraph(_graph(n, us, vs, ws))


def sparse_random(n, m, rng=None, neg_frac=0.3):
    """About ``m`` distinct random edges on ``n`` vertices, mixed signs."""
    rng = np.random.default_rng(rng)
    us = rng.integers(0, n, size=int(m * 1.05) + 16)
    vs = rng.integers(0, n, size=len(us))
    lo, hi = np.minimum(us, vs), np.maximum(us, vs)
    keep = lo != hi
    codes = np.unique(lo[keep].astype(np.int64) * n + hi[keep])[:m]
    rng.shuffle(codes)
    codes = np.sort(codes[:m])
    lo, hi = codes // n, codes % n
    ws = rng.uniform(0.1, 5.0, len(codes))
    ws[rng.random(len(codes)) < neg_frac] *= -1.0
    return DifferenceGraph(_graph(n, lo, hi, ws))


def dense_positive(n, rng=None, low=0.5, high=5.0, p=0.9):
    """Dense nonnegative instance; the replicator shrink stalls on these."""
    return random_signed(n, p, low, high, rng)
