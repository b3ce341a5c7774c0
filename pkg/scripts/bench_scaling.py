"""Time DCSGreedy on synthetic signed graphs of growing size."""

import argparse
import json
import time

import numpy as np

from dcs.dcsad import dcs_greedy
from dcs.synth import sparse_random


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[10**4, 10**5, 10**6])
    ap.add_argument("--avg-degree", type=float, default=10.0)
    ap.add_argument("--backend", choices=["heap", "segment"], default="heap")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rows = []
    for m in args.sizes:
        n = max(2, int(2 * m / args.avg_degree))
        dg = sparse_random(n, m, rng=args.seed + m)
        start = time.perf_counter()
        res = dcs_greedy(dg, backend=args.backend)
        elapsed = time.perf_counter() - start
        rows.append({"m": dg.gd.m, "n": n, "seconds": elapsed, "size": len(res.vertices),
                     "density": res.density, "beta": res.ratio_beta})
        print(json.dumps(rows[-1]))
    if len(rows) > 1:
        slope = np.polyfit(np.log([r["m"] for r in rows]), np.log([r["seconds"] for r in rows]), 1)[0]
        print(f"log-log slope: {slope:.3f}")


if __name__ == "__main__":
    main()
