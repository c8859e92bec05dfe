"""Command-line surface: solve, samplesize, bench, gen, validate, stats.

Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime failure.
Every run logs its fully resolved configuration (derived sample sizes,
seeds, thread count) to stderr; stdout carries only deterministic results
so a fixed seed reproduces output byte for byte.  Wall-clock timings go to
the stderr log and to ``--out`` files, never to stdout.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys

from . import bench, graphio
from .baselines import (LongPathConfig, select_degree, select_high_delay,
                        select_longpath_random, select_path_centrality,
                        select_random)
from .exact import brute_force_optimal, greedy_gr
from .graph import GraphError, GraphStats, UpgradeState, graph_stats, spd
from .pathcount import pcs_select, sample_size_uniform
from .sampling import (SamplingConfig, exhaustive_pairs, gs_select,
                       practical_sample_size, sample_size_general,
                       sample_size_smallworld)

log = logging.getLogger("delaymin")

DEFAULT_SEED = 42
THREADS_ENV = "DELAYMIN_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_graph_flags(p):
    p.add_argument("--edges", help="edge list file")
    p.add_argument("--delays", help="delay file (label value per line)")
    p.add_argument("--default-delay", type=float, default=1.0)
    p.add_argument("--labels", choices=["string", "integer"], default="string")
    p.add_argument("--gen-ba", metavar="N,M",
                   help="generate a preferential-attachment graph instead of loading")
    p.add_argument("--gen-seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--delay-scheme",
                   help="constant:X | uniform_int:LO:HI[:STEP] | uniform_real:LO:HI | file:PATH")
    p.add_argument("--delay-seed", type=int, default=DEFAULT_SEED)


def _load_graph(args):
    if args.gen_ba:
        try:
            n, m = (int(x) for x in args.gen_ba.split(","))
        except ValueError:
            raise UsageError(f"--gen-ba expects N,M, got {args.gen_ba!r}")
        g = graphio.generate_ba(graphio.BaSpec(n=n, edges_per_node=m,
                                               seed=args.gen_seed))
    elif args.edges:
        g = graphio.load_graph(graphio.GraphFileSpec(
            edge_path=args.edges, delay_path=args.delays,
            default_delay=args.default_delay, label_mode=args.labels))
    else:
        raise UsageError("need --edges FILE or --gen-ba N,M")
    if args.delay_scheme:
        g = graphio.assign_delays(g, args.delay_scheme, seed=args.delay_seed)
    return g


def _default_threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _emit(payload, as_json):
    if as_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print("  ".join(f"{k}={v}" for k, v in payload.items()))


def cmd_solve(args):
    g = _load_graph(args)
    n = g.node_count
    threads = args.threads if args.threads else _default_threads()
    cfg = SamplingConfig(epsilon=args.epsilon, c_factor=args.samples_c,
                         explicit_p=args.samples, seed=args.seed,
                         resample_each_iteration=args.resample or None,
                         threads=threads)
    log.info("resolved config: algo=%s budget=%d n=%d m=%d seed=%d threads=%d "
             "epsilon=%s c=%s explicit_p=%s", args.algo, args.budget, n,
             g.edge_count, args.seed, threads, args.epsilon, args.samples_c,
             args.samples)

    if args.algo == "pcs" and not g.is_uniform:
        raise UsageError("pcs requires the uniform model (all delays equal 1); "
                         "this graph has non-uniform delays")

    ledger = None
    if args.algo == "gr":
        ledger = greedy_gr(g, args.budget)
    elif args.algo == "gs":
        pairs = exhaustive_pairs(n) if args.exhaustive_pairs else None
        ledger = gs_select(g, args.budget, cfg, pairs=pairs)
    elif args.algo == "pcs":
        pairs = exhaustive_pairs(n) if args.exhaustive_pairs else None
        ledger = pcs_select(g, args.budget, cfg, pairs=pairs)
    elif args.algo == "brute":
        nodes, rs = brute_force_optimal(g, args.budget)
    elif args.algo == "random":
        nodes = select_random(g, args.budget, args.seed)
    elif args.algo == "degree":
        nodes = select_degree(g, args.budget)
    elif args.algo == "highdelay":
        nodes = select_high_delay(g, args.budget)
    elif args.algo == "pathcen":
        nodes = select_path_centrality(g, args.budget, iterative=False)
    elif args.algo == "itpathcen":
        nodes = select_path_centrality(g, args.budget, iterative=True)
    elif args.algo == "longpath-random":
        nodes = select_longpath_random(
            g, LongPathConfig(epsilon_len=args.budget / n, kb=args.kb or args.budget),
            args.seed)
    else:  # pragma: no cover - argparse rejects unknown algos
        raise UsageError(f"unknown algorithm {args.algo!r}")

    if ledger is not None:
        for i, step in enumerate(ledger.steps, start=1):
            log.info("step %d: node=%s rs=%.6g time_ms=%.2f", i,
                     g.label_of(step.node), step.rs, step.wall_time * 1e3)
            _emit({"step": i, "node": g.label_of(step.node),
                   "rs": step.rs, "rr": step.rs / ledger.initial_spd,
                   "spd_after": step.spd_after,
                   "estimated": step.estimated}, args.json)
        _emit({"selected": [g.label_of(v) for v in ledger.nodes],
               "initial_spd": ledger.initial_spd,
               "total_rs": ledger.total_rs, "final_rr": ledger.final_rr,
               "estimated": ledger.estimated}, args.json)
        result = {"nodes": list(ledger.nodes),
                  "labels": [g.label_of(v) for v in ledger.nodes],
                  "initial_spd": ledger.initial_spd,
                  "final_rr": ledger.final_rr,
                  "steps": [dataclasses.asdict(s) for s in ledger.steps]}
    else:
        st = UpgradeState.of(n, nodes)
        base = spd(g)
        rs = base - spd(g, st)
        _emit({"selected": [g.label_of(v) for v in nodes],
               "initial_spd": base, "total_rs": rs, "final_rr": rs / base},
              args.json)
        result = {"nodes": list(nodes), "labels": [g.label_of(v) for v in nodes],
                  "initial_spd": base, "total_rs": rs, "final_rr": rs / base}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(result, fh, indent=2, sort_keys=True)
    return 0


def cmd_samplesize(args):
    practical = practical_sample_size(args.n, args.c)
    if args.model == "uniform":
        p = sample_size_uniform(args.n, args.epsilon)
    elif args.model == "smallworld":
        p = sample_size_smallworld(args.n, args.lratio, args.epsilon)
    else:
        if args.diam is not None and args.lmin is not None:
            stats = GraphStats(diameter=args.diam, l_min=args.lmin,
                               l_max=args.lmin, spd=0.0)
            p = sample_size_general(stats, args.n, args.epsilon)
        elif args.edges or args.gen_ba:
            g = _load_graph(args)
            p = sample_size_general(graph_stats(g), g.node_count, args.epsilon)
        else:
            raise UsageError("general model needs --diam and --lmin "
                             "(or a graph to measure)")
    log.info("samplesize model=%s n=%d epsilon=%s -> formula_p=%d practical_p=%d",
             args.model, args.n, args.epsilon, p, practical)
    _emit({"model": args.model, "n": args.n, "epsilon": args.epsilon,
           "formula_p": p, "practical_c": args.c, "practical_p": practical},
          args.json)
    return 0


def cmd_bench(args):
    with open(args.spec, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    spec = bench.ExperimentSpec.from_dict(data)
    log.info("bench spec: %d algorithms x %d budgets x %d seeds (rr=%s)",
             len(spec.algorithms), len(spec.budgets), len(spec.seeds),
             spec.rr_mode)
    rows = bench.run_experiment(spec)
    if args.out:
        bench.rows_to_jsonl(rows, args.out)
    if args.table:
        bench.rows_to_table(rows, args.table)
    for (algo, k), mean_rr in bench.summarize(rows).items():
        _emit({"algorithm": algo, "k": k, "mean_rr": mean_rr}, args.json)
    failures = [r for r in rows if r.error]
    for r in failures:
        log.warning("cell failed: %s k=%d seed=%d: %s", r.algorithm, r.k,
                    r.seed, r.error)
    return 0


def cmd_gen(args):
    try:
        n, m = (int(x) for x in args.ba.split(","))
    except ValueError:
        raise UsageError(f"--ba expects N,M, got {args.ba!r}")
    g = graphio.generate_ba(graphio.BaSpec(n=n, edges_per_node=m, seed=args.seed))
    if args.delay_scheme:
        g = graphio.assign_delays(g, args.delay_scheme, seed=args.delay_seed)
    graphio.save_graph(g, args.out, args.delays_out)
    log.info("wrote %s (n=%d m=%d)", args.out, g.node_count, g.edge_count)
    _emit({"nodes": g.node_count, "edges": g.edge_count, "out": args.out},
          args.json)
    return 0


def cmd_validate(args):
    g = _load_graph(args)  # construction runs all invariant checks
    _emit({"valid": True, "nodes": g.node_count, "edges": g.edge_count,
           "uniform": g.is_uniform}, args.json)
    return 0


def cmd_stats(args):
    g = _load_graph(args)
    stats = graph_stats(g)
    _emit({"nodes": g.node_count, "edges": g.edge_count,
           "uniform": g.is_uniform, "diameter": stats.diameter,
           "l_min": stats.l_min, "l_max": stats.l_max, "spd": stats.spd},
          args.json)
    return 0


def build_parser():
    parser = _Parser(prog="delaymin",
                     description="Budgeted node upgrades minimizing "
                                 "all-pairs shortest-path delay")
    parser.add_argument("--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="select an upgrade set")
    _add_graph_flags(p)
    p.add_argument("--algo", required=True,
                   choices=["brute", "gr", "gs", "pcs", "random", "degree",
                            "highdelay", "pathcen", "itpathcen",
                            "longpath-random"])
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--samples-c", type=float, help="practical sample factor c")
    p.add_argument("--samples", type=int, help="explicit sample size p")
    p.add_argument("--exhaustive-pairs", action="store_true",
                   help="score against every ordered pair (exact estimator)")
    p.add_argument("--resample", action="store_true",
                   help="draw fresh pairs every iteration")
    p.add_argument("--kb", type=int, help="size of the longpath-random draw")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int, default=0,
                   help=f"worker threads (default: ${THREADS_ENV} or 1)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", help="write the full ledger (with timings) here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("samplesize", help="sample-size calculators")
    _add_graph_flags(p)
    p.add_argument("--model", required=True,
                   choices=["general", "smallworld", "uniform"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--diam", type=float)
    p.add_argument("--lmin", type=float)
    p.add_argument("--lratio", type=float, default=1.0)
    p.add_argument("--c", type=float, default=10.0)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_samplesize)

    p = sub.add_parser("bench", help="run an experiment spec")
    p.add_argument("--spec", required=True, help="JSON experiment spec")
    p.add_argument("--out", help="JSONL result rows")
    p.add_argument("--table", help="flat TSV table")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="generate a synthetic graph")
    p.add_argument("--ba", required=True, metavar="N,M")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", required=True, help="edge file to write")
    p.add_argument("--delays-out", help="delay file to write")
    p.add_argument("--delay-scheme")
    p.add_argument("--delay-seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", help="check graph invariants")
    _add_graph_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="diameter, delay range and SPD")
    _add_graph_flags(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None):
    # rebind the handler to the current stderr on every invocation
    log.handlers.clear()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.addHandler(handler)
    log.propagate = False
    log.setLevel(logging.INFO)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        log.error("usage: %s", exc)
        return 1
    except (GraphError, graphio.ParseError, bench.SpecError, OSError,
            json.JSONDecodeError) as exc:
        log.error("data error: %s", exc)
        return 2
    except Exception as exc:  # noqa: BLE001 - contract: runtime failures exit 3
        log.error("runtime failure: %s", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
