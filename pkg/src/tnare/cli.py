"""Command-line interface: ``solve``, ``bench``, ``swapbench`` and ``check``.

Exit codes: 0 success, 2 solver error, 3 bad input.
"""

import argparse
import csv
import json
import logging
import sys

from .analysis import DEFAULT_GRID, check_all, format_reports
from .bench import examples_suite, run_suite, swap_benchmark, synthetic_suite
from .errors import TNareError
from .methods import METHODS, solve
from .pencil import load_problem

EXIT_OK = 0
EXIT_SOLVER = 2
EXIT_INPUT = 3

log = logging.getLogger("tnare")


class _InputError(Exception):
    pass


def _load(path):
    try:
        return load_problem(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise _InputError(f"cannot read problem from {path}: {exc}") from exc


def _sizes(text):
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from exc
    if not sizes or any(s < 2 or s % 2 for s in sizes):
        raise argparse.ArgumentTypeError("sizes must be even integers >= 2")
    return sizes


def _cmd_solve(args):
    p = _load(args.input)
    rep = solve(p, args.method, eps=args.eps, maxit=args.maxit, k=args.nodes_log2)
    text = json.dumps(rep.to_json_dict())
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        print(text)
    log.info("%s: residual %.3e after %d iterations", rep.method, rep.residual,
             rep.iterations)
    return EXIT_OK


def _cmd_bench(args):
    if args.suite == "paper":
        specs = examples_suite(args.seed, include_large=args.large)
    else:
        sigmas = (args.sigma,) if args.sigma is not None else (1e-5, 1e-10)
        specs = synthetic_suite(args.seed, sigmas)
    table = run_suite(specs, eps=args.eps, maxit=args.maxit, out=args.out)
    print(table.to_markdown())
    return EXIT_OK


def _cmd_swapbench(args):
    if args.reps < 0:
        raise _InputError("reps must be non-negative")
    rows = swap_benchmark(args.sizes, args.reps, args.seed, check=not args.no_check)
    cols = ["n", "mean_time_s", "mean_swaps"]
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(cols + ([] if args.no_check else ["certified", "max_congruence_error"]))
    for r in rows:
        w.writerow([r[c] for c in cols]
                   + ([] if args.no_check else [r["certified"], r["max_congruence_error"]]))
    if args.out:
        with open(args.out, "w") as fh:
            cw = csv.writer(fh, lineterminator="\n")
            cw.writerow(cols)
            for r in rows:
                cw.writerow([r[c] for c in cols])
    return EXIT_OK


def _cmd_check(args):
    if args.grid < 16:
        raise _InputError("grid must be at least 16")
    p = _load(args.input)
    print(format_reports(check_all(p, grid=args.grid)))
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="tnare", description=(
        "Solve D X + X^T A - X^T B X + C = 0 via the palindromic pencil "
        "M + z M^T."))
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one problem from a JSON file")
    s.add_argument("--input", required=True)
    s.add_argument("--method", choices=METHODS, default="palqz")
    s.add_argument("--eps", type=float)
    s.add_argument("--maxit", type=int)
    s.add_argument("--nodes-log2", type=int, dest="nodes_log2")
    s.add_argument("--output")
    s.set_defaults(func=_cmd_solve)

    b = sub.add_parser("bench", help="run a benchmark suite")
    b.add_argument("--suite", choices=("paper", "synthetic"), default="paper")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--sigma", type=float)
    b.add_argument("--eps", type=float)
    b.add_argument("--maxit", type=int)
    b.add_argument("--large", action="store_true", help="include n = 784")
    b.add_argument("--out")
    b.set_defaults(func=_cmd_bench)

    w = sub.add_parser("swapbench", help="time antitriangular reordering")
    w.add_argument("--sizes", type=_sizes, default=_sizes("32,64,128,256"))
    w.add_argument("--reps", type=int, default=5)
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--no-check", action="store_true")
    w.add_argument("--out")
    w.set_defaults(func=_cmd_swapbench)

    c = sub.add_parser("check", help="report solvability and criticality conditions")
    c.add_argument("--input", required=True)
    c.add_argument("--grid", type=int, default=DEFAULT_GRID)
    c.set_defaults(func=_cmd_check)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TNareError as exc:
        print(f"solver error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
