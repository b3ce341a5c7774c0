"""Command line front end.

Subcommands: diff, dcsad, dcsga, oracle, stats, ingest.  Machine output is a
JSON run report on stdout (or ``--output``); the human-readable stats line
goes to stdout for ``diff`` and ``stats``.

Exit codes: 0 success, 2 usage, 3 input error, 4 solver did not converge.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time

from . import __version__
from .cooccur import cooccurrence_graph, load_stopwords
from .dcsad import dcs_greedy
from .dcsga import SolverConfig, SolverStats, new_sea, sea_refine
from .errors import DCSError, InputError, TooLarge
from .graph import (
    PRESETS,
    DifferenceGraph,
    WeightTransform,
    build_difference,
    dumps_edge_list,
    flip_signs,
    graph_stats,
    load_edge_list,
    transform_weights,
    write_edge_list,
)
from .oracle import oracle_dcsad, oracle_dcsga

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_NOT_CONVERGED = 4

log = logging.getLogger("dcs")


class UsageError(Exception):
    pass


def _digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


def _add_graph_inputs(p, positional=True):
    if positional:
        p.add_argument("gd", nargs="?", help="difference graph edge list")
    p.add_argument("--g1", help="first (older) graph; used with --g2")
    p.add_argument("--g2", help="second (newer) graph; used with --g1")
    p.add_argument("--alpha", type=float, default=1.0, help="D = A2 - alpha*A1")
    p.add_argument("--discretize", choices=sorted(PRESETS), help="discrete weight bands")
    p.add_argument("--clamp-max", type=float, help="cap edge weights at this value")
    p.add_argument("--flip", action="store_true", help="negate D (disappearing direction)")


def _load_difference(args):
    inputs = {}
    if args.g1 or args.g2:
        if not (args.g1 and args.g2):
            raise UsageError("--g1 and --g2 must be given together")
        if getattr(args, "gd", None):
            raise UsageError("give either a difference graph or --g1/--g2, not both")
        g1 = load_edge_list(args.g1)
        g2 = load_edge_list(args.g2)
        inputs[args.g1] = _digest(args.g1)
        inputs[args.g2] = _digest(args.g2)
        dg = build_difference(g1, g2, args.alpha)
    elif getattr(args, "gd", None):
        dg = DifferenceGraph(load_edge_list(args.gd))
        inputs[args.gd] = _digest(args.gd)
    else:
        raise UsageError("no input graph given")
    if args.clamp_max is not None:
        dg = transform_weights(dg, WeightTransform.clamp_max(args.clamp_max))
    if args.discretize:
        dg = transform_weights(dg, PRESETS[args.discretize])
    if args.flip:
        dg = flip_signs(dg)
    return dg, inputs


def _emit(args, payload):
    text = json.dumps(payload, indent=2) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(argv, inputs, config, result, started):
    return {
        "command": ["dcs"] + list(argv),
        "version": __version__,
        "inputs": inputs,
        "config": config,
        "result": result,
        "wall_time": round(time.perf_counter() - started, 6),
    }


def cmd_diff(args, argv, started):
    if not (args.g1 and args.g2):
        raise UsageError("diff needs --g1 and --g2")
    dg, _ = _load_difference(args)
    stats = graph_stats(dg.gd)
    if args.output:
        write_edge_list(dg.gd, args.output)
        print(stats.line())
    else:
        sys.stdout.write(dumps_edge_list(dg.gd))
        print(stats.line(), file=sys.stderr)
    return EXIT_OK


def cmd_stats(args, argv, started):
    dg, _ = _load_difference(args)
    stats = graph_stats(dg.gd)
    if args.json:
        print(json.dumps(stats.as_dict()))
    else:
        print(stats.line())
    return EXIT_OK


def cmd_dcsad(args, argv, started):
    dg, inputs = _load_difference(args)
    result = dcs_greedy(dg, backend=args.backend)
    config = {"alpha": args.alpha, "backend": args.backend, "flip": args.flip}
    _emit(args, _report(argv, inputs, config, result.to_json(dg.gd), started))
    return EXIT_OK


def cmd_dcsga(args, argv, started):
    dg, inputs = _load_difference(args)
    policy = "all" if args.all_inits or args.baseline == "replicator" else "smart"
    cfg = SolverConfig(
        eps_scale=args.eps,
        init_policy=policy,
        max_inits=args.max_inits,
        max_shrink_iters=args.max_shrink_iters,
        parallel_inits=args.threads > 1,
        threads=args.threads,
        audit=args.audit,
    )
    stats = SolverStats(audit=args.audit)
    if args.baseline == "replicator":
        result = sea_refine(dg, cfg, stats)
    else:
        result = new_sea(dg, cfg, stats)
    payload = result.to_json()
    if args.audit:
        payload["monotone_violations"] = stats.monotone_violations
    config = {
        "alpha": args.alpha,
        "eps_scale": cfg.eps_scale,
        "init_policy": cfg.init_policy,
        "max_inits": cfg.max_inits,
        "max_shrink_iters": cfg.max_shrink_iters,
        "baseline": args.baseline,
        "threads": args.threads,
        "flip": args.flip,
    }
    _emit(args, _report(argv, inputs, config, payload, started))
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_oracle(args, argv, started):
    dg, inputs = _load_difference(args)
    if args.measure == "ad":
        res = oracle_dcsad(dg.gd, args.limit or 15)
        witness = [dg.labels[u] for u in res.witness]
    else:
        res = oracle_dcsga(dg.gd, args.limit or 12)
        witness = [[dg.labels[u], w] for u, w in sorted(res.witness.items())]
    payload = {
        "measure": args.measure,
        "optimum_value": res.optimum_value,
        "witness": witness,
        "instances_enumerated": res.instances_enumerated,
    }
    config = {"alpha": args.alpha, "limit": args.limit, "flip": args.flip}
    _emit(args, _report(argv, inputs, config, payload, started))
    return EXIT_OK


def cmd_ingest(args, argv, started):
    stopwords = load_stopwords(args.stopwords)
    with open(args.docs, encoding="utf-8") as fh:
        g = cooccurrence_graph(fh, stopwords)
    if args.output:
        write_edge_list(g, args.output)
    else:
        sys.stdout.write(dumps_edge_list(g))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="dcs", description="Density contrast subgraph mining")
    parser.add_argument("--version", action="version", version=f"dcs {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("diff", help="build a difference graph")
    _add_graph_inputs(p, positional=False)
    p.add_argument("-o", "--output", help="write the difference graph here")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("stats", help="difference-graph statistics")
    _add_graph_inputs(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("dcsad", help="average-degree contrast (DCSGreedy)")
    _add_graph_inputs(p)
    p.add_argument("--backend", choices=["heap", "segment"], default="heap")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dcsad)

    p = sub.add_parser("dcsga", help="graph-affinity contrast (NewSEA)")
    _add_graph_inputs(p)
    p.add_argument("--eps", type=float, default=1e-2, help="gradient-gap scale (tol = eps/|S|)")
    p.add_argument("--max-inits", type=int)
    p.add_argument("--all-inits", action="store_true", help="seed from every vertex")
    p.add_argument("--max-shrink-iters", type=int, default=200_000)
    p.add_argument("--baseline", choices=["replicator"], help="replicator shrink baseline")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--audit", action="store_true", help="check monotonicity at every step")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dcsga)

    p = sub.add_parser("oracle", help="exact brute force for small graphs")
    _add_graph_inputs(p)
    p.add_argument("--measure", choices=["ad", "ga"], default="ga")
    p.add_argument("--limit", type=int, help="largest n to enumerate")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("ingest", help="keyword co-occurrence graph from text")
    p.add_argument("docs", help="one document per line")
    p.add_argument("-o", "--output")
    p.add_argument("--stopwords", default="default", help="'default', 'none' or a file")
    p.set_defaults(func=cmd_ingest)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    started = time.perf_counter()
    try:
        return args.func(args, argv, started)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dcs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, TooLarge, OSError) as exc:
        print(f"dcs: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DCSError as exc:
        print(f"dcs: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
