"""Acceptance suite behind the ``verify`` subcommand.

Ten criteria, each a standalone check returning a CriterionResult.  The
suite prints one line per criterion and exits nonzero iff any fails.  Checks
that measure something (crossing ratios, count errors, query costs, estimator
errors, level histograms) also emit their measurements as CSVs so a run
leaves auditable artifacts; the pass/fail gates below are computed from those
same rows.

All thresholds are fixed here, not configurable: the suite is a contract,
not an experiment.  ``fault="budget-contract"`` deliberately breaks the
budget rule of the approximate counter and must flip A4 to FAIL (negative
control for the harness itself).
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import bench, plots
from .bench import ExperimentConfig, derive_seed, median_query
from .datasets import gen_points
from .depth import (
    depth_exact_naive,
    depth_exact_sweep,
    depth_via_dual_identity,
    estimate_depth,
)
from .geometry import (
    COORD_BOUND,
    Point,
    counts_in_halfplanes,
    pair_halfplane_arrays,
)
from .halving import build_chain, halve, random_pair_halfplanes
from .lowcross import crossing_numbers_bulk, matching_for_points
from .medside import ExactMajorityOracle, MajorityOracle

FAULTS = ("budget-contract",)


@dataclass
class CriterionResult:
    cid: str
    name: str
    passed: bool
    detail: str
    seconds: float


def _result(cid: str, name: str, passed: bool, detail: str, t0: float) -> CriterionResult:
    return CriterionResult(cid, name, passed, detail, time.perf_counter() - t0)


def _off_line_query(points: Sequence[Point], seed: int) -> Point:
    """Random integer query avoiding every pair boundary (needed by the
    dual-identity method)."""
    n = len(points)
    ii, jj = np.triu_indices(n, k=1)
    a, b, c = pair_halfplane_arrays(points, ii, jj)
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        qx = int(rng.integers(-COORD_BOUND + 1, COORD_BOUND))
        qy = int(rng.integers(-COORD_BOUND + 1, COORD_BOUND))
        if not np.any(a * qx + b * qy + c == 0):
            return Point(qx, qy)
    raise RuntimeError("could not place a query off all pair boundaries")


def check_oracle_agreement(seed: int = 0) -> CriterionResult:
    """A1: naive, sweep, and dual-identity agree exactly on seeded
    general-position instances, n in {5, 8, 16, 32, 64}, 100 each."""
    t0 = time.perf_counter()
    checked = 0
    for n in (5, 8, 16, 32, 64):
        for t in range(100):
            points = gen_points(
                "uniform-disk", n, seed=derive_seed(seed, 1, n, t), ensure_general_position=True
            )
            q = _off_line_query(points, derive_seed(seed, 1, n, t, 1))
            d_naive = depth_exact_naive(points, q)
            d_sweep = depth_exact_sweep(points, q)
            d_dual = depth_via_dual_identity(points, q)
            if not d_naive == d_sweep == d_dual:
                detail = (
                    f"mismatch at n={n} trial={t}: naive={d_naive} "
                    f"sweep={d_sweep} dual-identity={d_dual}"
                )
                return _result("A1", "oracle-agreement", False, detail, t0)
            checked += 1
    return _result(
        "A1", "oracle-agreement", True, f"naive=sweep=dual-identity on {checked} instances", t0
    )


def check_trivial_depth(seed: int = 0) -> CriterionResult:
    """A2: depth is exactly C(n,2) for n in {2, 3, 4}, any query (every
    closed side holds its two boundary points, hence at least n/2)."""
    t0 = time.perf_counter()
    span = 2**17
    queries = 0
    for n in (2, 3, 4):
        expected = n * (n - 1) // 2
        for t in range(50):
            rng = np.random.default_rng([seed, 2, n, t])
            while True:
                pts = [
                    Point(int(x), int(y))
                    for x, y in rng.integers(-span, span, size=(n, 2))
                ]
                if len({(p.x, p.y) for p in pts}) == n:
                    break
            kind = t % 3
            if kind == 0:
                q = Point(int(rng.integers(-span, span)), int(rng.integers(-span, span)))
            elif kind == 1:
                u, v = pts[0], pts[1]
                q = Point(2 * v.x - u.x, 2 * v.y - u.y)  # collinear with a pair
            else:
                q = pts[int(rng.integers(0, n))]  # coincides with a data point
            got = (depth_exact_naive(pts, q), depth_exact_sweep(pts, q))
            if got != (expected, expected):
                detail = f"n={n} trial={t} q=({q.x},{q.y}): got {got}, want {expected}"
                return _result("A2", "trivial-depth-law", False, detail, t0)
            queries += 1
    return _result(
        "A2", "trivial-depth-law", True, f"depth=C(n,2) on {queries} queries, n in 2..4", t0
    )


def check_crossing_bound(seed: int = 0) -> tuple[CriterionResult, list[tuple]]:
    """A3: matching crossing number <= 4*sqrt(n) on every one of 50 seeded
    uniform instances per n in 2^4..2^12; reports the empirical constant."""
    t0 = time.perf_counter()
    cfg = ExperimentConfig("crossing", sizes=tuple(2**k for k in range(4, 13)), trials=50, seed=seed)
    rows = bench.run_crossing(cfg)
    worst_ratio = 0.0
    bad = []
    for n, structure, trial, _mc, ratio in rows:
        if structure != "matching":
            continue
        worst_ratio = max(worst_ratio, ratio)
        if ratio > 4.0:
            bad.append((n, trial, ratio))
    passed = not bad
    if passed:
        detail = f"matching max crossing = {worst_ratio:.2f} sqrt(n) <= 4 sqrt(n), 50x9 instances"
    else:
        n, trial, ratio = bad[0]
        detail = f"{len(bad)} instances over 4 sqrt(n); first n={n} trial={trial} ratio={ratio:.2f}"
    return _result("A3", "crossing-bound", passed, detail, t0), rows


def check_budget_contract(
    seed: int = 0, fault: bool = False
) -> tuple[CriterionResult, list[tuple]]:
    """A4: |approx - exact| <= i for every probe and budget on at least 19 of
    20 seeded chain builds at n=4096, N=n^2, i in {64, 128, 256, 512}."""
    t0 = time.perf_counter()
    cfg = ExperimentConfig("approx-error", sizes=(4096,), trials=20, seed=seed)
    rows = bench.run_approx_error(cfg, force=fault)
    build_ok: dict[int, bool] = {}
    worst = 0.0
    for _n, trial, i, _level, err, within in rows:
        build_ok[trial] = build_ok.get(trial, True) and bool(within)
        worst = max(worst, err / i)
    good = sum(build_ok.values())
    passed = good >= 19
    detail = f"{good}/20 builds within budget at every i, worst |err|/i = {worst:.2f}"
    return _result("A4", "approx-count-contract", passed, detail, t0), rows


def check_halving_unbiased(seed: int = 0) -> CriterionResult:
    """A5: over 10^4 seeded halvings of a fixed n=100 instance, the mean of
    2|h cap S'| stays within 4*sqrt(m_c/10^4) of |h cap S| for a fixed
    halfplane h crossing m_c matching edges."""
    t0 = time.perf_counter()
    n = 100
    points = gen_points("uniform-disk", n, seed=derive_seed(seed, 5, 0))
    matching, _tree = matching_for_points(points)
    rng = np.random.default_rng([seed, 5, 1])
    a, b, c = random_pair_halfplanes(points, 64, rng)
    crossings = crossing_numbers_bulk(matching, points, (a, b, c))
    k = int(np.argmax(crossings > 0))
    m_c = int(crossings[k])
    if m_c == 0:
        return _result("A5", "halving-unbiasedness", False, "no crossing probe found", t0)
    xs = np.array([p.x for p in points], dtype=np.int64)
    ys = np.array([p.y for p in points], dtype=np.int64)
    inside = a[k] * xs + b[k] * ys + c[k] >= 0
    truth = int(inside.sum())
    trials = 10_000
    ids = np.arange(n)
    total = 0
    for t in range(trials):
        kept = halve(matching, ids, np.random.default_rng([seed, 5, 2, t]))
        total += 2 * int(inside[kept].sum())
    mean = total / trials
    tol = 4.0 * math.sqrt(m_c / trials)
    passed = abs(mean - truth) <= tol
    detail = (
        f"mean 2|h cap S'| = {mean:.3f} vs |h cap S| = {truth}, "
        f"|diff| = {abs(mean - truth):.3f} <= {tol:.3f} (m_c={m_c})"
    )
    return _result("A5", "halving-unbiasedness", passed, detail, t0)


def check_query_cost_scaling(seed: int = 0) -> tuple[CriterionResult, list[tuple]]:
    """A6: mean nodes per majority query grows by <= 3.0x from n=2^10 to
    n=2^14 while exact counting over the same pairs grows by >= 3.5x."""
    t0 = time.perf_counter()
    cfg = ExperimentConfig("side-query-cost", sizes=(2**10, 2**14), trials=1, seed=seed)
    rows = bench.run_side_query_cost(cfg)
    per_n = {int(r[0]): r for r in rows}
    small, big = per_n[2**10], per_n[2**14]
    ratio_major = big[3] / small[3]
    ratio_exact = big[5] / small[5]
    passed = ratio_major <= 3.0 and ratio_exact >= 3.5
    detail = (
        f"majority mean-nodes ratio {ratio_major:.2f} <= 3.0, "
        f"exact ratio {ratio_exact:.2f} >= 3.5 (10^4 queries each)"
    )
    return _result("A6", "query-cost-scaling", passed, detail, t0), rows


def check_majority_agreement(seed: int = 0) -> CriterionResult:
    """A7: is_majority agrees with the naive >= n/2 predicate on all 2*C(n,2)
    closed pair-boundary halfplanes for 20 builds at n=128; one reseeded
    retry per build, two consecutive misses fail."""
    t0 = time.perf_counter()
    n = 128
    points = gen_points("uniform-disk", n, seed=derive_seed(seed, 7, 0))
    ii, jj = np.triu_indices(n, k=1)
    parts = [pair_halfplane_arrays(points, ii, jj, flip=f) for f in (False, True)]
    coeffs = tuple(np.concatenate([p[k] for p in parts]) for k in range(3))
    want = 2 * counts_in_halfplanes(points, coeffs) >= n
    retries = 0
    for b in range(20):
        ok = False
        for attempt in range(2):
            chain = build_chain(points, seed=derive_seed(seed, 7, 1, b, attempt))
            got = MajorityOracle(chain).is_majority_many(coeffs)
            if np.array_equal(got, want):
                ok = True
                break
            retries += 1
        if not ok:
            detail = f"build {b} disagreed twice on {len(want)} boundary halfplanes"
            return _result("A7", "majority-test-correctness", False, detail, t0)
    detail = f"20 builds agree on all {len(want)} boundary halfplanes ({retries} retries)"
    return _result("A7", "majority-test-correctness", True, detail, t0)


def check_estimator_concentration(seed: int = 0) -> tuple[CriterionResult, list[tuple]]:
    """A8: n=256 uniform, q = coordinate-wise median, r=2000: at least 95% of
    200 seeded trials have relative error <= 0.1 and the mean estimate lands
    within 1% of the exact depth."""
    t0 = time.perf_counter()
    n, r, trials = 256, 2000, 200
    points = gen_points("uniform-disk", n, seed=derive_seed(seed, 8, 0))
    q = median_query(points)
    exact = depth_exact_sweep(points, q)
    chain = build_chain(points, seed=derive_seed(seed, 8, 1))
    oracle = MajorityOracle(chain)
    rows = []
    estimates = []
    for t in range(trials):
        est = estimate_depth(points, q, oracle, r=r, seed=derive_seed(seed, 8, 2, t))
        estimates.append(est.d_prime)
        rows.append((n, r, t, abs(est.d_prime - exact) / exact))
    frac_ok = sum(1 for row in rows if row[3] <= 0.1) / trials
    mean_rel = abs(sum(estimates) / trials - exact) / exact
    passed = frac_ok >= 0.95 and mean_rel <= 0.01
    detail = (
        f"{frac_ok:.1%} of trials within 10% (need 95%), "
        f"mean offset {mean_rel:.2%} <= 1% (exact d = {exact})"
    )
    return _result("A8", "estimator-concentration", passed, detail, t0), rows


def check_exhaustive_exactness(seed: int = 0) -> CriterionResult:
    """A9: exhaustive estimator mode with exact majority answers equals the
    naive depth on 50 instances, n in 5..40."""
    t0 = time.perf_counter()
    for t in range(50):
        n = 5 + t % 36
        points = gen_points("uniform-disk", n, seed=derive_seed(seed, 9, t))
        rng = np.random.default_rng([seed, 9, t, 1])
        q = Point(int(rng.integers(-(2**19), 2**19)), int(rng.integers(-(2**19), 2**19)))
        est = estimate_depth(points, q, ExactMajorityOracle(points), exhaustive=True)
        want = depth_exact_naive(points, q)
        if est.d_prime != want or est.r != n * (n - 1) // 2:
            detail = f"trial {t} n={n}: census d'={est.d_prime} (r={est.r}) vs naive {want}"
            return _result("A9", "exhaustive-exactness", False, detail, t0)
    return _result(
        "A9", "exhaustive-exactness", True, "census mode equals naive depth on 50 instances", t0
    )


def check_histogram_totals(seed: int = 0) -> tuple[CriterionResult, list[tuple]]:
    """A10: level-histogram buckets sum to C(n,2) with nondecreasing
    cumulative counts for n in {64, 128, 256}; rows are emitted as CSV."""
    t0 = time.perf_counter()
    cfg = ExperimentConfig("level-histogram", sizes=(64, 128, 256), seed=seed)
    rows = bench.run_level_histogram(cfg)
    for n in cfg.sizes:
        sub = [row for row in rows if row[0] == n]
        total = n * (n - 1) // 2
        cums = [row[3] for row in sub]
        if sum(row[2] for row in sub) != total or cums != sorted(cums) or cums[-1] != total:
            detail = f"n={n}: bucket sum {sum(r[2] for r in sub)} vs C(n,2)={total}"
            return _result("A10", "level-histogram-sanity", False, detail, t0), rows
    detail = "bucket totals equal C(n,2), cumulatives nondecreasing, n in {64,128,256}"
    return _result("A10", "level-histogram-sanity", True, detail, t0), rows


# criterion id -> (display name, runner, csv stem or None); runners returning
# rows pair with the experiment whose renderer understands those rows
_CRITERIA: list[tuple[str, Callable, str | None, str | None]] = [
    ("A1", check_oracle_agreement, None, None),
    ("A2", check_trivial_depth, None, None),
    ("A3", check_crossing_bound, "crossing", "crossing"),
    ("A4", check_budget_contract, "approx_error", "approx-error"),
    ("A5", check_halving_unbiased, None, None),
    ("A6", check_query_cost_scaling, "query_cost", "side-query-cost"),
    ("A7", check_majority_agreement, None, None),
    ("A8", check_estimator_concentration, "estimator_error", "estimator-error"),
    ("A9", check_exhaustive_exactness, None, None),
    ("A10", check_histogram_totals, "level_histogram", "level-histogram"),
]


def run_acceptance(
    out_dir: str = "acceptance_out",
    seed: int = 0,
    fault: str | None = None,
    plot: bool = True,
    stream=None,
) -> list[CriterionResult]:
    """Run A1..A10 in order, printing one PASS/FAIL line each, and write the
    measurement CSVs (and figures unless plot is false) under out_dir."""
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; known: {', '.join(FAULTS)}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stream = stream or sys.stdout
    results: list[CriterionResult] = []
    for cid, fn, csv_stem, experiment in _CRITERIA:
        if cid == "A4":
            outcome = fn(seed, fault == "budget-contract")
        else:
            outcome = fn(seed)
        if isinstance(outcome, tuple):
            result, rows = outcome
        else:
            result, rows = outcome, None
        results.append(result)
        status = "PASS" if result.passed else "FAIL"
        print(f"{result.cid} {result.name}: {status} ({result.detail})", file=stream, flush=True)
        if rows is not None and csv_stem is not None:
            bench.write_csv(str(out / f"{csv_stem}.csv"), bench.HEADERS[experiment], rows)
            if plot:
                plots.render(experiment, rows, str(out / f"{csv_stem}.png"))
    total = sum(r.seconds for r in results)
    failed = [r.cid for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} criteria failed: {', '.join(failed)} ({total:.1f}s)", file=stream)
    else:
        print(f"all {len(results)} criteria passed ({total:.1f}s)", file=stream)
    return results
