"""Command-line front end.

Subcommands:

* ``solve``: run one solver on a matrix file, print the result, optionally
  dump the iteration trace to CSV.
* ``bench``: sweep (dimension, seed, algorithm), write a benchmark CSV and
  optionally an SVG chart of median iterations per algorithm.
* ``verify``: run the randomized property suites.
* ``adversarial``: multi-start search for a monotonicity counterexample.

Exit codes: 0 success, 1 property or threshold violation, 2 usage or parse
error, 3 non-convergence. ``BFP_THREADS`` caps benchmark worker processes
(default: logical core count).
"""

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .exceptions import LineSearchError, ValidationError
from .fileio import (
    BenchRow,
    format_float,
    read_matrix,
    write_bench_csv,
    write_bench_svg,
    write_matrix,
    write_trace_csv,
)
from .solvers import ALGORITHMS, SolverConfig, solve
from .validation import check_positive_definite, check_positive_vector
from .verify import SUITES, adversarial_search, instance_generator, run_suite

__all__ = ["main"]

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_NO_CONVERGENCE = 3


def _parse_dims(text):
    try:
        dims = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list: {text!r}") from None
    if not dims:
        raise argparse.ArgumentTypeError("dimension list is empty")
    if any(n < 1 for n in dims):
        raise argparse.ArgumentTypeError("dimensions must be >= 1")
    return dims


def _resolve_v0(spec, n):
    """Starting vector from its CLI spelling.

    "ones", "rand:<seed>" (uniform on [0.1, 1.1)), or an explicit comma
    list of positive reals of length n.
    """
    if spec == "ones":
        return np.ones(n)
    if spec.startswith("rand:"):
        try:
            seed = int(spec.split(":", 1)[1])
        except ValueError:
            raise ValidationError(f"bad v0 seed in {spec!r}") from None
        return np.random.default_rng(seed).random(n) + 0.1
    try:
        values = [float(part) for part in spec.split(",")]
    except ValueError:
        raise ValidationError(
            f"v0 must be 'ones', 'rand:<seed>' or a comma list of reals, got {spec!r}"
        ) from None
    v0 = check_positive_vector(np.asarray(values), "v0")
    if v0.size != n:
        raise ValidationError(f"v0 has {v0.size} entries, matrix needs {n}")
    return v0


def _thread_count():
    raw = os.environ.get("BFP_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError:
        raise ValidationError(f"BFP_THREADS must be an integer, got {raw!r}") from None
    if count < 1:
        raise ValidationError(f"BFP_THREADS must be >= 1, got {count}")
    return count


def cmd_solve(args):
    m = read_matrix(args.matrix)
    m = check_positive_definite(m, "matrix")
    v0 = _resolve_v0(args.v0, m.shape[0])
    cfg = SolverConfig(algorithm=args.algorithm, tol=args.tol, max_iters=args.max_iters)
    try:
        trace = solve(m, v0, cfg)
    except LineSearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.trace is not None and args.trace:
            write_trace_csv(args.trace, exc.trace)
        return EXIT_NO_CONVERGENCE
    print("v:", " ".join(format_float(x) for x in trace.final_v))
    print("J:", format_float(trace.final_j))
    print("iterations:", trace.iterations)
    print("residual:", format_float(trace.final_residual))
    print("converged:", "true" if trace.converged else "false")
    if args.trace:
        write_trace_csv(args.trace, trace)
    if not trace.converged:
        print(
            f"error: residual above tol after {trace.iterations} iterations",
            file=sys.stderr,
        )
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def _bench_task(task):
    n, seed, algorithm, tol, max_iters = task
    m, v0 = instance_generator(n, seed)
    cfg = SolverConfig(algorithm=algorithm, tol=tol, max_iters=max_iters)
    t0 = time.perf_counter()
    try:
        trace = solve(m, v0, cfg)
    except LineSearchError as exc:
        trace = exc.trace
    wall_ms = (time.perf_counter() - t0) * 1e3
    return BenchRow(
        n=n,
        seed=seed,
        algorithm=algorithm,
        iterations=trace.iterations,
        converged=trace.converged,
        final_residual=trace.final_residual,
        final_J=trace.final_j,
        wall_ms=wall_ms,
    )


def cmd_bench(args):
    tasks = [
        (n, args.seed + k, alg, args.tol, args.max_iters)
        for n in args.dims
        for k in range(args.seeds)
        for alg in ALGORITHMS
    ]
    workers = min(_thread_count(), len(tasks))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_bench_task, tasks, chunksize=4))
    else:
        rows = [_bench_task(t) for t in tasks]
    write_bench_csv(args.out, rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    if args.svg:
        write_bench_svg(
            args.svg, rows, title=f"median iterations to residual {args.tol:g}"
        )
        print(f"wrote chart to {args.svg}")
    return EXIT_OK


def cmd_verify(args):
    results = run_suite(args.suite, trials=args.trials, seed=args.seed)
    failed_any = False
    for res in results:
        print(f"{res.name}: {res.passed} passed, {res.failed} failed")
        for line in res.failures[:10]:
            print(f"  FAIL {line}")
        if len(res.failures) > 10:
            print(f"  ... {len(res.failures) - 10} more")
        failed_any = failed_any or res.failed
    return EXIT_VIOLATION if failed_any else EXIT_OK


def cmd_adversarial(args):
    report = adversarial_search(args.n, args.starts, args.seed)
    print(f"min_gain: {format_float(report.min_gain)}")
    print(f"evaluations: {report.evaluations} over {report.starts} starts")
    if report.argmin is not None:
        m, v = report.argmin
        print("argmin v:", " ".join(format_float(x) for x in v))
        print("argmin M:")
        for row in m:
            print("  " + " ".join(f"{x:.9g}" for x in row))
    if report.min_gain >= -args.threshold:
        print(f"no violation: min_gain >= -{args.threshold:g}")
        return EXIT_OK
    m, v = report.argmin
    m_path = args.save_prefix + "_M.txt"
    v_path = args.save_prefix + "_v.txt"
    write_matrix(m_path, m, comment=f"adversarial counterexample, gain {report.min_gain!r}")
    with open(v_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# adversarial counterexample, gain {report.min_gain!r}\n")
        fh.write(" ".join(format_float(x) for x in v) + "\n")
    print(
        f"VIOLATION: min_gain {format_float(report.min_gain)} < -{args.threshold:g}; "
        f"instance saved to {m_path}, {v_path}",
        file=sys.stderr,
    )
    return EXIT_VIOLATION


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bfp",
        description="Fixed-point solvers and verification for the nuclear-norm potential",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-8, help="residual tolerance")
    common.add_argument(
        "--max-iters", type=int, default=100_000, help="iteration budget"
    )
    common.add_argument("--seed", type=int, default=0, help="base random seed")

    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser(
        "solve", parents=[common], help="solve one instance from a matrix file"
    )
    p_solve.add_argument("matrix", help="path to a matrix file")
    p_solve.add_argument(
        "--algorithm", choices=ALGORITHMS, default="jump", help="iteration to run"
    )
    p_solve.add_argument(
        "--v0", default="ones", help="'ones', 'rand:<seed>', or comma list"
    )
    p_solve.add_argument("--trace", help="write per-iteration CSV here")
    p_solve.set_defaults(fn=cmd_solve)

    p_bench = sub.add_parser(
        "bench", parents=[common], help="benchmark sweep over (n, seed, algorithm)"
    )
    p_bench.add_argument(
        "--dims",
        type=_parse_dims,
        default=[2, 4, 8, 16, 32, 64],
        help="comma-separated matrix sizes (default 2,4,8,16,32,64)",
    )
    p_bench.add_argument(
        "--seeds", type=int, default=20, help="seeds per dimension (default 20)"
    )
    p_bench.add_argument("--out", required=True, help="output CSV path")
    p_bench.add_argument("--svg", help="optional SVG chart path")
    p_bench.set_defaults(fn=cmd_bench)

    p_verify = sub.add_parser(
        "verify", parents=[common], help="run randomized property suites"
    )
    p_verify.add_argument(
        "--suite", choices=SUITES + ("all",), default="all", help="suite to run"
    )
    p_verify.add_argument(
        "--trials", type=int, default=200, help="trials per suite (default 200)"
    )
    p_verify.set_defaults(fn=cmd_verify)

    p_adv = sub.add_parser(
        "adversarial", parents=[common], help="search for a monotonicity violation"
    )
    p_adv.add_argument("--n", type=int, required=True, help="instance dimension")
    p_adv.add_argument(
        "--starts", type=int, default=50, help="independent starts (default 50)"
    )
    p_adv.add_argument(
        "--threshold",
        type=float,
        default=1e-8,
        help="violation threshold on the gain (default 1e-8)",
    )
    p_adv.add_argument(
        "--save-prefix",
        default="counterexample",
        help="file prefix for a found counterexample",
    )
    p_adv.set_defaults(fn=cmd_adversarial)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValidationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
