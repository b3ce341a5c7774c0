"""Seeds used and wall time of NewSEA with smart vs all-vertex seeding."""

import argparse
import time

import numpy as np

from dcs.dcsga import SolverConfig, new_sea
from dcs.synth import planted_clique, random_signed


def timed(dg, cfg):
    start = time.perf_counter()
    res = new_sea(dg, cfg)
    return res, time.perf_counter() - start


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[50, 200, 1000])
    ap.add_argument("--avg-degree", type=float, default=6.0)
    ap.add_argument("--planted", type=int, default=8, help="planted clique size, 0 for none")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'n':>6} {'f smart':>10} {'f all':>10} {'inits smart':>11} {'inits all':>9} {'t smart':>8} {'t all':>8}")
    for n in args.n:
        if args.planted:
            dg = planted_clique(args.planted, n - args.planted, args.avg_degree / n, rng=rng)
        else:
            dg = random_signed(n, args.avg_degree / n, rng=rng)
        smart, ts = timed(dg, SolverConfig())
        full, ta = timed(dg, SolverConfig(init_policy="all"))
        print(f"{n:>6} {smart.value:>10.6f} {full.value:>10.6f} {smart.inits_used:>11} "
              f"{full.inits_used:>9} {ts:>8.3f} {ta:>8.3f}")


if __name__ == "__main__":
    main()
