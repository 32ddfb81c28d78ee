"""Command-line front end.

Four subcommands:

  gen     write a seeded point-set file
  depth   compute or estimate the depth of a query point, JSON on stdout
  bench   run one scaling experiment, CSV (plus a PNG figure) on disk
  verify  run the acceptance suite, one PASS/FAIL line per criterion

Machine-readable output (JSON, CSV) goes to stdout or files; status notes go
to stderr.  All commands are deterministic given their seed.  Errors exit
with status 2; a failed verify run exits with status 1.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import EXPERIMENTS, ExperimentConfig, run_experiment, write_csv
from .datasets import DISTRIBUTIONS, gen_points
from .depth import (
    depth_exact_naive,
    depth_exact_sweep,
    depth_via_dual_identity,
    estimate_depth,
    pilot_p_hat,
    sample_size_for,
)
from .geometry import GeneralPositionError, GeometryError, Point, read_points, write_points
from .halving import build_chain
from .medside import ExactMajorityOracle, MajorityOracle
from .verify import FAULTS, run_acceptance

_METHODS = ("naive", "sweep", "dual-identity", "estimate", "all")


def _parse_query(text: str) -> Point:
    try:
        sx, sy = text.split(",")
        return Point(int(sx.strip()), int(sy.strip()))
    except GeometryError:
        raise
    except Exception:
        raise ValueError(f'query must look like "x,y" with integers, got {text!r}')


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except Exception:
        raise ValueError(f'sizes must be a comma list of integers, got {text!r}')


def _cmd_gen(args: argparse.Namespace) -> int:
    ensure = {"auto": None, "always": True, "never": False}[args.general_position]
    points = gen_points(args.distribution, args.n, seed=args.seed, ensure_general_position=ensure)
    write_points(args.out, points)
    print(f"wrote {args.out} ({len(points)} points, {args.distribution})", file=sys.stderr)
    return 0


def _cmd_depth(args: argparse.Namespace) -> int:
    points = read_points(args.points)
    q = _parse_query(args.query)
    method = args.method
    report: dict = {
        "n": len(points),
        "q": [q.x, q.y],
        "naive": None,
        "sweep": None,
        "dual_identity": None,
        "d_prime": None,
        "r": None,
        "r_prime": None,
        "p_hat": None,
        "epsilon_observed": None,
        "seed": args.seed,
        "ties_flagged": None,
    }
    if method in ("naive", "all"):
        report["naive"] = depth_exact_naive(points, q)
    if method in ("sweep", "all"):
        report["sweep"] = depth_exact_sweep(points, q)
    if method in ("dual-identity", "all"):
        try:
            report["dual_identity"] = depth_via_dual_identity(points, q)
        except GeneralPositionError as exc:
            if method == "dual-identity":
                raise
            print(f"dual-identity skipped: {exc}", file=sys.stderr)
    if method in ("estimate", "all"):
        if args.exact_majority:
            oracle: ExactMajorityOracle | MajorityOracle = ExactMajorityOracle(points)
        else:
            chain = build_chain(points, N=args.big_n, seed=args.seed)
            oracle = MajorityOracle(chain)
        r = args.samples
        if r is None and not args.exhaustive:
            p0 = pilot_p_hat(points, q, oracle, seed=args.seed)
            r = sample_size_for(args.epsilon, p0, args.confidence, len(points))
            print(f"pilot p_hat={p0} -> r={r}", file=sys.stderr)
        est = estimate_depth(points, q, oracle, r=r, seed=args.seed, exhaustive=args.exhaustive)
        report["d_prime"] = est.d_prime
        report["r"] = est.r
        report["r_prime"] = est.r_prime
        report["p_hat"] = est.p_hat
        report["ties_flagged"] = est.ties_flagged
    exact = next(
        (report[k] for k in ("sweep", "naive", "dual_identity") if report[k] is not None), None
    )
    if exact and report["d_prime"] is not None:
        report["epsilon_observed"] = abs(report["d_prime"] - exact) / exact
    print(json.dumps(report))
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    cfg = ExperimentConfig(
        experiment=args.experiment,
        sizes=_parse_sizes(args.sizes) if args.sizes else (),
        trials=args.trials or 0,
        seed=args.seed,
        distribution=args.distribution,
        epsilon=args.epsilon,
        confidence=args.confidence,
        big_n=args.big_n,
        samples=args.samples,
        jobs=args.jobs,
    )
    header, rows = run_experiment(cfg)
    out = args.out or f"{args.experiment}.csv"
    write_csv(out, header, rows)
    print(f"wrote {out} ({len(rows)} rows)", file=sys.stderr)
    if not args.no_plot:
        from . import plots

        png = out[:-4] + ".png" if out.endswith(".csv") else out + ".png"
        plots.render(args.experiment, rows, png)
        print(f"wrote {png}", file=sys.stderr)
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    results = run_acceptance(
        out_dir=args.out or "acceptance_out",
        seed=args.seed,
        fault=args.inject_fault,
        plot=not args.no_plot,
    )
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="majdepth",
        description="Majority depth of planar point sets: exact oracles and a sampling estimator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="write a seeded point-set file")
    p_gen.add_argument("--distribution", choices=DISTRIBUTIONS, default="uniform-disk")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True, help="output point file")
    p_gen.add_argument(
        "--general-position",
        choices=("auto", "always", "never"),
        default="auto",
        help="enforce no-collinear-triples (auto: only for n <= 512)",
    )
    p_gen.set_defaults(fn=_cmd_gen)

    p_depth = sub.add_parser("depth", help="depth of a query point, JSON report on stdout")
    p_depth.add_argument("--points", required=True, help="point file (see gen)")
    p_depth.add_argument("--query", required=True, help='query point as "x,y"')
    p_depth.add_argument("--method", choices=_METHODS, default="all")
    p_depth.add_argument("--samples", type=int, default=None, help="estimator sample count r")
    p_depth.add_argument("--epsilon", type=float, default=0.1, help="target relative error")
    p_depth.add_argument(
        "--confidence", type=float, default=2.0, help="constant c in r = c ln(n)/(eps^2 p)"
    )
    p_depth.add_argument(
        "--bigN", dest="big_n", type=int, default=None, help="chain failure horizon N (default n^2)"
    )
    p_depth.add_argument("--seed", type=int, default=0)
    p_depth.add_argument(
        "--exact-majority", action="store_true", help="use the exact majority test"
    )
    p_depth.add_argument(
        "--exhaustive", action="store_true", help="census mode: every pair exactly once"
    )
    p_depth.set_defaults(fn=_cmd_depth)

    p_bench = sub.add_parser("bench", help="run one experiment, CSV + figure")
    p_bench.add_argument("--experiment", choices=EXPERIMENTS, required=True)
    p_bench.add_argument("--sizes", default=None, help="comma list of point counts")
    p_bench.add_argument("--trials", type=int, default=None)
    p_bench.add_argument("--distribution", choices=DISTRIBUTIONS, default="uniform-disk")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--epsilon", type=float, default=0.1)
    p_bench.add_argument("--confidence", type=float, default=2.0)
    p_bench.add_argument("--bigN", dest="big_n", type=int, default=None)
    p_bench.add_argument("--samples", type=int, default=None, help="fixed estimator sample count")
    p_bench.add_argument("--jobs", type=int, default=1, help="worker processes for trials")
    p_bench.add_argument("--out", default=None, help="CSV path (default <experiment>.csv)")
    p_bench.add_argument("--no-plot", action="store_true", help="skip the PNG figure")
    p_bench.set_defaults(fn=_cmd_bench)

    p_verify = sub.add_parser("verify", help="run the acceptance suite")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--out", default=None, help="artifact directory (default acceptance_out)")
    p_verify.add_argument("--no-plot", action="store_true", help="skip the PNG figures")
    p_verify.add_argument(
        "--inject-fault", choices=FAULTS, default=None, help="negative control; must fail A4"
    )
    p_verify.set_defaults(fn=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (GeometryError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
