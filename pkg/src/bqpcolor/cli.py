"""Command-line entry point: ``bqpcolor {solve,bench,transform,oracle}``."""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .bench import DEFAULT_PENALTY, load_manifest, report, run_graph, run_instance
from .engine import SolverConfig
from .graph import degree_stats, read_dimacs
from .oracle import brute_force_mscp
from .transform import build_linear_model, check_penalty, to_qubo, write_qubo

log = logging.getLogger("bqpcolor")


def _default_colors(path: Path, graph) -> int:
    """Manifest K when the file is a known benchmark, else max degree + 1."""
    spec = load_manifest().get(path.stem)
    if spec is not None and spec.vertices in (None, graph.vertex_count):
        return spec.num_colors
    return degree_stats(graph)[0] + 1


def _solver_args(p: argparse.ArgumentParser, time_limit: float | None) -> None:
    p.add_argument("--penalty", type=int, default=DEFAULT_PENALTY, help="negative penalty scalar P")
    p.add_argument("--seed", type=int, default=0, help="base seed; run r uses seed + r")
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--time-limit", type=float, default=time_limit, help="seconds per run")
    p.add_argument("--max-iterations", type=int, default=None,
                   help="tabu iteration budget per run (reproducible stop condition)")
    p.add_argument("--refset-size", type=int, default=10)
    p.add_argument("--workers", type=int, default=1, help="parallel runs")
    p.add_argument("--format", choices=("csv", "json", "text"), default="text")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")
    p.add_argument("--figures", type=Path, help="directory for trajectory/deviation PNGs")


def _config(args, time_limit: float) -> SolverConfig:
    if args.max_iterations is not None and args.time_limit is None:
        time_limit = float("inf")
    return SolverConfig(refset_size=args.refset_size, time_limit=time_limit,
                        seed=args.seed, max_iterations=args.max_iterations)


def _emit(args, reports) -> None:
    text = report(reports, args.format)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.figures:
        from .plotting import write_figures
        for path in write_figures(reports, args.figures):
            log.info("wrote %s", path)


def cmd_solve(args) -> int:
    graph = read_dimacs(args.file)
    K = args.colors or _default_colors(args.file, graph)
    check_penalty(args.penalty, K)
    cfg = _config(args, args.time_limit if args.time_limit is not None else 60.0)
    if args.target_sum is not None:
        cfg = replace(cfg, target=-args.target_sum)
    rep = run_graph(graph, K, args.runs, args.seed, cfg, args.penalty, bkr=args.bkr or args.target_sum,
                    workers=args.workers)
    _emit(args, [rep])
    return 0 if rep.infeasible_runs == 0 else 2


def cmd_bench(args) -> int:
    specs = load_manifest(args.manifest)
    names = args.instances or list(specs)
    unknown = [n for n in names if n not in specs]
    if unknown:
        raise SystemExit(f"unknown instances: {', '.join(unknown)}")
    reports = []
    for name in names:
        spec = specs[name]
        if spec.resolve() is None:
            log.warning("skipping %s: file not available (%s)", name, spec.path)
            continue
        if args.time_limit is not None:
            limit = args.time_limit
        elif args.original_time_limits and spec.original_time_limit:
            limit = spec.original_time_limit
        else:
            limit = spec.time_limit
        cfg = _config(args, limit)
        log.info("%s: K=%d, %d runs, limit %s", name, spec.num_colors, args.runs, limit)
        check_penalty(args.penalty, spec.num_colors)
        reports.append(run_instance(spec, args.runs, args.seed, cfg, args.penalty,
                                    args.workers, stop_at_bkr=args.stop_at_bkr))
    _emit(args, reports)
    return 0 if all(r.infeasible_runs == 0 for r in reports) else 2


def cmd_transform(args) -> int:
    graph = read_dimacs(args.file)
    K = args.colors or _default_colors(args.file, graph)
    q = to_qubo(build_linear_model(graph, K), args.penalty)
    out = args.out or args.file.with_suffix(".qubo")
    write_qubo(q, out)
    print(f"{args.file.name}: n={graph.vertex_count} K={K} N={q.dimension} "
          f"pairs={q.offdiag_pair_count()} constant={q.constant} -> {out}")
    return 0


def cmd_oracle(args) -> int:
    graph = read_dimacs(args.file)
    K = args.colors or _default_colors(args.file, graph)
    res = brute_force_mscp(graph, K)
    print(f"chromatic sum (K={K}): {res.optimum}")
    print("coloring: " + " ".join(str(c) for c in res.witness.colors))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bqpcolor", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one DIMACS graph repeatedly")
    p.add_argument("file", type=Path)
    p.add_argument("--colors", "-K", type=int, help="number of colors K")
    p.add_argument("--bkr", type=int, help="best known sum, for deviation columns")
    p.add_argument("--target-sum", type=int, help="stop a run once this sum is reached")
    _solver_args(p, None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run manifest instances")
    p.add_argument("--manifest", type=Path, help="manifest file (default: bundled)")
    p.add_argument("--instances", nargs="+", help="subset of instance names")
    p.add_argument("--original-time-limits", action="store_true",
                   help="use the original 1h/10h/20h budgets")
    p.add_argument("--stop-at-bkr", action="store_true", help="end a run once it reaches BKR")
    _solver_args(p, None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("transform", help="write the QUBO of a graph")
    p.add_argument("file", type=Path)
    p.add_argument("--colors", "-K", type=int)
    p.add_argument("--penalty", type=int, default=DEFAULT_PENALTY)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("oracle", help="exact chromatic sum by enumeration (tiny graphs)")
    p.add_argument("file", type=Path)
    p.add_argument("--colors", "-K", type=int)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
