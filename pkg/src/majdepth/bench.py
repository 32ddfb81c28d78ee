"""Benchmark experiments behind the ``bench`` subcommand.

Five experiments, each emitting one flat CSV (header row, comma-separated,
newline-terminated, no quoting):

  crossing         n,structure,trial,max_crossing,ratio_to_sqrt_n
  approx-error     n,trial,i,level,max_abs_error,within_budget
  side-query-cost  n,trial,queries,mean_nodes,p99_nodes,mean_exact_nodes,p99_exact_nodes
  estimator-error  n,r,trial,rel_error
  level-histogram  n,i,n_i,cumulative

Every row is deterministic given (seed, config): each trial draws from
generators seeded by (seed, n, trial, stage), so results do not depend on
execution order and a worker pool (``jobs > 1``) cannot reorder or perturb
them.  Rows are emitted in (n, trial) order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .datasets import DISTRIBUTIONS, gen_points
from .depth import depth_exact_sweep, estimate_depth, pilot_p_hat, sample_size_for
from .geometry import Point, pair_halfplane_arrays
from .halving import build_chain, random_pair_halfplanes
from .lowcross import (
    EdgeSet,
    crossing_numbers_bulk,
    matching_from_path,
    path_from_tree,
    spanning_tree,
)
from .medside import MajorityOracle, level_histogram
from .ptree import build_partition_tree

EXPERIMENTS = (
    "crossing",
    "approx-error",
    "side-query-cost",
    "estimator-error",
    "level-histogram",
)

DEFAULT_SIZES: dict[str, tuple[int, ...]] = {
    "crossing": (16, 32, 64, 128, 256, 512, 1024, 2048, 4096),
    "approx-error": (4096,),
    "side-query-cost": (1024, 16384),
    "estimator-error": (256,),
    "level-histogram": (64, 128, 256),
}

DEFAULT_TRIALS: dict[str, int] = {
    "crossing": 50,
    "approx-error": 20,
    "side-query-cost": 1,
    "estimator-error": 200,
    "level-histogram": 1,
}

HEADERS: dict[str, tuple[str, ...]] = {
    "crossing": ("n", "structure", "trial", "max_crossing", "ratio_to_sqrt_n"),
    "approx-error": ("n", "trial", "i", "level", "max_abs_error", "within_budget"),
    "side-query-cost": (
        "n",
        "trial",
        "queries",
        "mean_nodes",
        "p99_nodes",
        "mean_exact_nodes",
        "p99_exact_nodes",
    ),
    "estimator-error": ("n", "r", "trial", "rel_error"),
    "level-histogram": ("n", "i", "n_i", "cumulative"),
}

# Exhaustive halfplane probing (all pair boundaries, both sides, both epsilon
# shifts) is quadratic in n; above this size 10^3 random probes stand in.
EXHAUSTIVE_PROBE_LIMIT = 256
RANDOM_PROBES = 1000
SIDE_QUERIES = 10_000


def derive_seed(*parts: int) -> int:
    """Stable integer seed from an integer path, for APIs that take one seed.

    Paths of equal length never collide; a single trailing zero does not
    change the pool, so call sites tag a fixed position instead of relying
    on path length.
    """
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


@dataclass
class ExperimentConfig:
    experiment: str
    sizes: tuple[int, ...] = ()
    trials: int = 0
    seed: int = 0
    distribution: str = "uniform-disk"
    epsilon: float = 0.1
    confidence: float = 2.0
    big_n: int | None = None
    samples: int | None = None
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")
        self.sizes = tuple(int(n) for n in self.sizes) or DEFAULT_SIZES[self.experiment]
        if self.trials <= 0:
            self.trials = DEFAULT_TRIALS[self.experiment]
        if any(n < 2 for n in self.sizes):
            raise ValueError("sizes must all be at least 2")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must be in (0, 1]")
        if self.confidence <= 0:
            raise ValueError("confidence must be positive")
        if self.big_n is not None and self.big_n < 2:
            raise ValueError("N must be at least 2")
        if self.samples is not None and self.samples < 1:
            raise ValueError("samples must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")


def _map_tasks(fn, tasks: list, jobs: int) -> list[tuple]:
    if jobs <= 1 or len(tasks) <= 1:
        chunks = [fn(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(fn, tasks))
    return [row for chunk in chunks for row in chunk]


# --- crossing ------------------------------------------------------------------


def exhaustive_pair_probes(
    points: Sequence[Point],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Both closed sides of every pair boundary, unshifted and shifted by one
    (the integer epsilon offset), as one coefficient batch."""
    n = len(points)
    ii, jj = np.triu_indices(n, k=1)
    parts = [
        pair_halfplane_arrays(points, ii, jj, flip=flip, shift=shift)
        for flip in (False, True)
        for shift in (0, 1)
    ]
    return tuple(np.concatenate([p[k] for p in parts]) for k in range(3))


def max_crossing(
    edges: EdgeSet,
    points: Sequence[Point],
    coeffs: tuple[np.ndarray, np.ndarray, np.ndarray],
    chunk: int = 8192,
) -> int:
    """Max crossing number over a probe batch, chunked to bound the
    probes-by-points membership matrix."""
    a, b, c = coeffs
    best = 0
    for lo in range(0, len(a), chunk):
        sl = slice(lo, lo + chunk)
        counts = crossing_numbers_bulk(edges, points, (a[sl], b[sl], c[sl]))
        if len(counts):
            best = max(best, int(counts.max()))
    return best


def _crossing_trial(task: tuple) -> list[tuple]:
    n, trial, seed, distribution = task
    points = gen_points(
        distribution, n, seed=derive_seed(seed, n, trial, 0), ensure_general_position=False
    )
    tree = build_partition_tree(points)
    tree_edges = spanning_tree(tree)
    path = path_from_tree(tree_edges, range(n))
    matching = matching_from_path(path)
    if n <= EXHAUSTIVE_PROBE_LIMIT:
        coeffs = exhaustive_pair_probes(points)
    else:
        rng = np.random.default_rng([seed, n, trial, 1])
        coeffs = random_pair_halfplanes(points, RANDOM_PROBES, rng)
    root_n = math.sqrt(n)
    rows = []
    for name, edges in (("tree", tree_edges), ("path", path), ("matching", matching)):
        mc = max_crossing(edges, points, coeffs)
        rows.append((n, name, trial, mc, mc / root_n))
    return rows


def run_crossing(cfg: ExperimentConfig) -> list[tuple]:
    tasks = [
        (n, t, cfg.seed, cfg.distribution) for n in cfg.sizes for t in range(cfg.trials)
    ]
    return _map_tasks(_crossing_trial, tasks, cfg.jobs)


# --- approx-error ----------------------------------------------------------------


def budgets_for(n: int) -> tuple[int, ...]:
    """Error budgets n/64, n/32, n/16, n/8 (64..512 at n=4096)."""
    return tuple(sorted({max(1, n >> k) for k in (6, 5, 4, 3)}))


def _approx_trial(task: tuple) -> list[tuple]:
    n, trial, seed, big_n, force = task
    points = gen_points(
        "uniform-disk", n, seed=derive_seed(seed, n, trial, 0), ensure_general_position=False
    )
    chain = build_chain(points, N=big_n, seed=derive_seed(seed, n, trial, 1))
    if force:
        # negative-control hook: answer every budget from the coarsest level
        chain._force_level = len(chain.levels) - 1
    truth_tree = chain.levels[0].tree
    rows = []
    for i in budgets_for(n):
        rng = np.random.default_rng([seed, n, trial, 2, i])
        coeffs = random_pair_halfplanes(points, RANDOM_PROBES, rng)
        truth, _ = truth_tree.count_many(coeffs)
        approx, _, j = chain.approx_count_many(coeffs, i)
        err = int(np.abs(approx.astype(np.int64) - truth.astype(np.int64)).max())
        rows.append((n, trial, i, j, err, int(err <= i)))
    return rows


def run_approx_error(cfg: ExperimentConfig, force: bool = False) -> list[tuple]:
    tasks = [
        (n, t, cfg.seed, cfg.big_n, force) for n in cfg.sizes for t in range(cfg.trials)
    ]
    return _map_tasks(_approx_trial, tasks, cfg.jobs)


# --- side-query-cost ---------------------------------------------------------


def _side_cost_trial(task: tuple) -> list[tuple]:
    n, trial, seed, big_n, queries = task
    points = gen_points(
        "uniform-disk", n, seed=derive_seed(seed, n, trial, 0), ensure_general_position=False
    )
    chain = build_chain(points, N=big_n, seed=derive_seed(seed, n, trial, 1))
    oracle = MajorityOracle(chain)
    rng = np.random.default_rng([seed, n, trial, 2])
    ii = rng.integers(0, n, size=queries)
    jj = rng.integers(0, n - 1, size=queries)
    jj = np.where(jj >= ii, jj + 1, jj)
    coeffs = pair_halfplane_arrays(points, ii, jj)
    oracle.is_majority_many(coeffs)
    stats = oracle.query_cost()
    _, visited = chain.levels[0].tree.count_many(coeffs)
    return [
        (
            n,
            trial,
            queries,
            stats.mean_nodes,
            stats.p99_nodes,
            float(visited.mean()),
            float(np.percentile(visited, 99)),
        )
    ]


def run_side_query_cost(cfg: ExperimentConfig, queries: int = SIDE_QUERIES) -> list[tuple]:
    tasks = [
        (n, t, cfg.seed, cfg.big_n, queries) for n in cfg.sizes for t in range(cfg.trials)
    ]
    return _map_tasks(_side_cost_trial, tasks, cfg.jobs)


# --- estimator-error --------------------------------------------------------


def median_query(points: Sequence[Point]) -> Point:
    """Coordinate-wise lower-median point (stays on integer coordinates)."""
    xs = sorted(p.x for p in points)
    ys = sorted(p.y for p in points)
    k = (len(points) - 1) // 2
    return Point(xs[k], ys[k])


def _estimator_task(task: tuple) -> list[tuple]:
    n, seed, t_lo, t_hi, samples, epsilon, confidence, big_n = task
    points = gen_points("uniform-disk", n, seed=derive_seed(seed, n, 0))
    q = median_query(points)
    exact = depth_exact_sweep(points, q)
    chain = build_chain(points, N=big_n, seed=derive_seed(seed, n, 1))
    oracle = MajorityOracle(chain)
    r = samples
    if r is None:
        p0 = pilot_p_hat(points, q, oracle, seed=derive_seed(seed, n, 2))
        r = sample_size_for(epsilon, p0, confidence, n)
    rows = []
    for t in range(t_lo, t_hi):
        est = estimate_depth(points, q, oracle, r=r, seed=derive_seed(seed, n, 3, t))
        rel = abs(est.d_prime - exact) / exact if exact else abs(est.d_prime)
        rows.append((n, r, t, rel))
    return rows


def run_estimator_error(cfg: ExperimentConfig) -> list[tuple]:
    # one shared instance and chain per n; trials only re-sample, so the pool
    # splits the trial range instead of the (n, trial) grid
    tasks = []
    for n in cfg.sizes:
        step = max(1, math.ceil(cfg.trials / cfg.jobs))
        for lo in range(0, cfg.trials, step):
            tasks.append(
                (
                    n,
                    cfg.seed,
                    lo,
                    min(cfg.trials, lo + step),
                    cfg.samples,
                    cfg.epsilon,
                    cfg.confidence,
                    cfg.big_n,
                )
            )
    return _map_tasks(_estimator_task, tasks, cfg.jobs)


# --- level-histogram ----------------------------------------------------------


def _histogram_task(task: tuple) -> list[tuple]:
    n, seed = task
    points = gen_points("uniform-disk", n, seed=derive_seed(seed, n, 0))
    hist = level_histogram(points)
    return [(n, i, count, cum) for i, count, cum in hist.rows()]


def run_level_histogram(cfg: ExperimentConfig) -> list[tuple]:
    return _map_tasks(_histogram_task, [(n, cfg.seed) for n in cfg.sizes], cfg.jobs)


# --- dispatch + CSV -----------------------------------------------------------

_RUNNERS = {
    "crossing": run_crossing,
    "approx-error": run_approx_error,
    "side-query-cost": run_side_query_cost,
    "estimator-error": run_estimator_error,
    "level-histogram": run_level_histogram,
}


def run_experiment(cfg: ExperimentConfig) -> tuple[tuple[str, ...], list[tuple]]:
    return HEADERS[cfg.experiment], _RUNNERS[cfg.experiment](cfg)


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path: str, header: Sequence[str], rows: Sequence[tuple]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_cell(v) for v in row) for row in rows)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path: str) -> tuple[list[str], list[list[str]]]:
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]
