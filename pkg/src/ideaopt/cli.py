"""Command-line entry point: ``ideaopt {run,bench,analyze,samplesize}``.

Exit status is 0 on success, 2 for usage errors (bad names, flags or
parameter files) and 3 when a run fails.  Output files go to ``--out`` or,
when omitted, to ``$IDEAOPT_DATA_DIR`` (default: the working directory).
"""

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import harness, landscape
from .config import ALGORITHM_NAMES, ConfigError, build_algorithm, read_params, write_params
from .problems import get_problem, problem_names
from .records import Archive

DATA_DIR_ENV = "IDEAOPT_DATA_DIR"
EXIT_USAGE = 2
EXIT_RUNTIME = 3

SAMPLESIZE_NOTE = """\
n = ceil(0.25 * chi2_1(1 - alpha) / d_err^2), with chi2_1(0.95) = 3.8415.

Note: the formula gives n = 385 for d_err = 0.05 and alpha = 0.05.  A value
of n = 175 for that case, and an error of 0.020857 for n = 1000, are
sometimes quoted alongside this formula.  Neither follows from it: n = 1000
gives d_err = 0.031.  This command evaluates the formula as written.
"""


class UsageError(Exception):
    pass


def _data_dir(path):
    if path:
        return Path(path)
    return Path(os.environ.get(DATA_DIR_ENV, "."))


def _positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _int_list(text):
    try:
        values = [int(float(v)) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("budgets must be positive")
    return values


def _float_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _problem(name):
    try:
        return get_problem(name)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None


def _algorithm(name, problem, params_path):
    params = read_params(params_path) if params_path else {}
    return build_algorithm(name, problem, params)


def cmd_run(args):
    problem = _problem(args.problem)
    algorithm, resolved = _algorithm(args.algo, problem, args.params)
    rng = harness.child_rng(args.seed, 0)
    report = algorithm(problem, args.budget, rng)
    out = _data_dir(args.out)
    out.mkdir(parents=True, exist_ok=True)
    stem = f"{problem.name}_{args.algo}_s{args.seed}"
    report.write_trace_csv(out / f"{stem}_trace.csv")
    report.archive.write_jsonl(out / f"{stem}_archive.jsonl", problem.name)
    resolved["run"] = {"problem": problem.name, "algorithm": args.algo,
                       "budget": args.budget, "seed": args.seed}
    write_params(out / f"{stem}_params.ini", resolved)
    summary = {"problem": problem.name, "algorithm": args.algo, "seed": args.seed,
               "best_f": report.best_f, "evaluations": report.evaluations,
               "best_x": None if report.best_x is None else [float(v) for v in report.best_x]}
    (out / f"{stem}_best.json").write_text(json.dumps(summary, indent=1) + "\n")
    print(f"{problem.name} {args.algo} seed={args.seed} best_f={report.best_f:.10g} "
          f"evaluations={report.evaluations}")
    return 0


def cmd_bench(args):
    problem = _problem(args.problem)
    algos = [a for group in args.algo for a in group.split(",") if a]
    built = [(name, _algorithm(name, problem, args.params)[0]) for name in algos]
    tol_f = args.tol_f if args.tol_f is not None else problem.tol_f
    results = {}
    for name, algorithm in built:
        for N in args.budgets:
            start = time.perf_counter()
            reports = harness.run_many(algorithm, problem, args.runs, N, args.seed, args.jobs)
            results[name, N] = (reports, time.perf_counter() - start)
    if args.f_ref == "best-found":
        f_ref = min(r.best_f for reports, _ in results.values() for r in reports)
    elif args.f_ref is None:
        if problem.f_best is None:
            raise UsageError(f"{problem.name} has no reference value; pass --f-ref")
        f_ref = problem.f_best
    else:
        try:
            f_ref = float(args.f_ref)
        except ValueError:
            raise UsageError(f"--f-ref must be a number or 'best-found', got {args.f_ref!r}")
    rows = []
    for (name, N), (reports, wall) in results.items():
        row = harness.summarize(reports, f_ref, tol_f, name, problem.name, args.seed, N)
        row.wall_seconds = wall
        rows.append(row)
    text = harness.to_csv(rows, timing=args.timing)
    if args.out:
        path = Path(args.out)
        if not path.is_absolute() and os.environ.get(DATA_DIR_ENV):
            path = Path(os.environ[DATA_DIR_ENV]) / path
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_analyze(args):
    records = []
    for path in args.archive:
        try:
            records += Archive.read_jsonl(path).records
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read archive {path}: {exc}") from None
    archive = landscape.merge_minima(records)
    if len(archive) == 0:
        raise UsageError("the merged archive is empty")
    dims = {r.x.size for r in archive}
    if len(dims) != 1:
        raise UsageError("archives mix different dimensions")
    if args.best_known is not None:
        best = np.array(args.best_known)
    elif args.problem:
        problem = _problem(args.problem)
        if problem.x_best is None:
            raise UsageError(f"{problem.name} has no best-known point; pass --best-known")
        best = problem.domain.normalize(problem.x_best)
    else:
        best = archive.records[int(np.argmin(archive.values))].x
    if best.size != dims.pop():
        raise UsageError("best-known point has the wrong dimension")
    edges = None if args.edges is None else np.array(args.edges)
    try:
        part = landscape.assign_levels(archive.points, archive.values, edges)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d_il, d_tl = landscape.level_distances(part, best)
    out = Path(args.out) if args.out else _data_dir(None) / "landscape.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    landscape.write_csv(out, part, d_il, d_tl)
    for level, count, il, tl in landscape.level_means(part, d_il, d_tl):
        print(f"level {level}: {count} minima, mean d_il={il:.4g}, mean d_tl={tl:.4g}")
    return 0


def cmd_samplesize(args):
    try:
        n = harness.required_sample_size(args.d_err, args.alpha)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(n)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="ideaopt", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    names = ", ".join(problem_names())

    run = sub.add_parser("run", help="one optimization run")
    run.add_argument("--problem", required=True, help=f"one of: {names} (analytic: name:d)")
    run.add_argument("--algo", required=True, choices=ALGORITHM_NAMES)
    run.add_argument("--budget", required=True, type=_positive_int)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--params", help="INI parameter file ([de], [idea], [mbh], [baseline])")
    run.add_argument("--out", help=f"output directory (default ${DATA_DIR_ENV} or .)")
    run.set_defaults(func=cmd_run)

    bench = sub.add_parser("bench", help="success rates over repeated runs")
    bench.add_argument("--problem", required=True)
    bench.add_argument("--algo", required=True, action="append",
                       help="algorithm name; repeat or comma-separate for several")
    bench.add_argument("--runs", type=_positive_int, default=20)
    bench.add_argument("--budgets", type=_int_list, default=[50000])
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--params")
    bench.add_argument("--tol-f", type=float, help="success tolerance (default: per problem)")
    bench.add_argument("--f-ref", help="reference value, or 'best-found' for the best final "
                                       "value over all runs of this invocation")
    bench.add_argument("--jobs", type=_positive_int, default=1)
    bench.add_argument("--timing", action="store_true",
                       help="fill wall_seconds (otherwise blank, keeping output reproducible)")
    bench.add_argument("--out", help="CSV path (default: stdout)")
    bench.set_defaults(func=cmd_bench)

    analyze = sub.add_parser("analyze", help="intra/trans-level distances of archived minima")
    analyze.add_argument("--archive", required=True, nargs="+")
    analyze.add_argument("--edges", type=_float_list, help="interior level thresholds")
    analyze.add_argument("--best-known", type=_float_list,
                         help="normalized best-known point (default: from --problem, else the "
                              "best archived minimum)")
    analyze.add_argument("--problem")
    analyze.add_argument("--out", help="CSV path")
    analyze.set_defaults(func=cmd_analyze)

    size = sub.add_parser("samplesize", help="runs needed for a success-rate error bound",
                          description=SAMPLESIZE_NOTE,
                          formatter_class=argparse.RawDescriptionHelpFormatter)
    size.add_argument("--d-err", type=float, default=0.05)
    size.add_argument("--alpha", type=float, default=0.05)
    size.set_defaults(func=cmd_samplesize)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"ideaopt {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - reported as a runtime failure
        print(f"ideaopt {args.command}: failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
