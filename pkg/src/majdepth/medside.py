"""Majority-side decisions and the arrangement-level histogram.

The two rounding conventions used across the package are fixed here:

* majority predicate: a closed halfplane h is a major side of S exactly when
  |h ∩ S| >= n/2, evaluated in integers as 2*|h ∩ S| >= n;
* median level: floor(n/2) lines strictly above (``median_level_index``).

A query point on a pair's boundary line belongs to both closed sides;
callers test both sides and flag the tie.

``MajorityOracle.is_majority`` runs the doubling schedule: budgets
i_j = floor(n/2^j) for j = 0, 1, ..., asking ``approx_count(h, i_j)`` until
|r - n/2| > i_j decides the side.  A budget at or below n^(1/4) makes the
count exact, which settles the query immediately (the answer can no longer
change; this short-circuit returns the same decision the literal schedule
would reach after shrinking i_j below |r - n/2| or hitting the exact
fallback at i_j = 0).  ``is_majority_many`` is the batched equivalent and
the test suite holds the two paths identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import (
    Halfplane,
    Point,
    ParallelDualsError,
    count_in_halfplane_naive,
    counts_in_halfplanes,
    halfplane_arrays,
    pair_vertex_levels,
)
from .halving import HalvingChain

__all__ = [
    "is_major_count",
    "median_level_index",
    "QueryStats",
    "MajorityOracle",
    "ExactMajorityOracle",
    "is_majority",
    "query_cost",
    "LevelHistogram",
    "level_histogram",
]


def is_major_count(count: int, n: int) -> bool:
    """count >= n/2, exact for odd n."""
    return 2 * count >= n


def median_level_index(n: int) -> int:
    return n // 2


@dataclass
class QueryStats:
    """Counters accumulated per oracle; query_cost() snapshots and resets.

    per_query_nodes / per_query_calls have one entry per majority query.
    """

    majority_queries: int = 0
    count_queries: int = 0
    nodes_visited: int = 0
    exact_fallbacks: int = 0
    per_query_nodes: list[int] = field(default_factory=list)
    per_query_calls: list[int] = field(default_factory=list)

    @property
    def mean_nodes(self) -> float:
        return float(np.mean(self.per_query_nodes)) if self.per_query_nodes else 0.0

    @property
    def p99_nodes(self) -> float:
        if not self.per_query_nodes:
            return 0.0
        return float(np.percentile(self.per_query_nodes, 99))


class MajorityOracle:
    """Majority-side tester backed by a halving chain."""

    def __init__(self, chain: HalvingChain) -> None:
        self.chain = chain
        self.n = chain.n
        self._stats = QueryStats()

    def is_majority(self, h: Halfplane) -> bool:
        n = self.n
        chain = self.chain
        nodes = calls = 0
        j = 0
        while True:
            i_j = n >> j
            r, visited, lvl = chain.approx_count_with_cost(h, i_j)
            calls += 1
            nodes += visited
            if lvl == 0:
                self._stats.exact_fallbacks += 1
                result = 2 * r >= n
                break
            if abs(2 * r - n) > 2 * i_j:
                result = 2 * r > n
                break
            j += 1
        self._stats.majority_queries += 1
        self._stats.count_queries += calls
        self._stats.nodes_visited += nodes
        self._stats.per_query_nodes.append(nodes)
        self._stats.per_query_calls.append(calls)
        return result

    def is_majority_many(
        self,
        coeffs: Sequence[Halfplane] | tuple[np.ndarray, np.ndarray, np.ndarray],
    ) -> np.ndarray:
        """Batched is_majority; one schedule step counts all still-unresolved
        queries on the same level, so decisions and per-query costs match the
        scalar path exactly."""
        if not isinstance(coeffs, tuple):
            coeffs = halfplane_arrays(coeffs)
        a, b, c = coeffs
        q = len(a)
        n = self.n
        result = np.zeros(q, dtype=bool)
        nodes = np.zeros(q, dtype=np.int64)
        calls = np.zeros(q, dtype=np.int64)
        active = np.arange(q, dtype=np.int64)
        j = 0
        while len(active):
            i_j = n >> j
            r, visited, lvl = self.chain.approx_count_many(
                (a[active], b[active], c[active]), i_j
            )
            calls[active] += 1
            nodes[active] += visited
            if lvl == 0:
                result[active] = 2 * r >= n
                self._stats.exact_fallbacks += len(active)
                active = active[:0]
                break
            resolved = np.abs(2 * r - n) > 2 * i_j
            result[active[resolved]] = 2 * r[resolved] > n
            active = active[~resolved]
            j += 1
        self._stats.majority_queries += q
        self._stats.count_queries += int(calls.sum())
        self._stats.nodes_visited += int(nodes.sum())
        self._stats.per_query_nodes.extend(int(v) for v in nodes)
        self._stats.per_query_calls.extend(int(v) for v in calls)
        return result

    def query_cost(self) -> QueryStats:
        """Return accumulated counters and reset them."""
        out = self._stats
        self._stats = QueryStats()
        return out


class ExactMajorityOracle:
    """Reference majority tester: exact naive counting, same interface."""

    def __init__(self, points: Sequence[Point]) -> None:
        self.points = list(points)
        self.n = len(self.points)
        self._stats = QueryStats()

    def is_majority(self, h: Halfplane) -> bool:
        self._stats.majority_queries += 1
        self._stats.count_queries += 1
        return is_major_count(count_in_halfplane_naive(self.points, h), self.n)

    def is_majority_many(
        self,
        coeffs: Sequence[Halfplane] | tuple[np.ndarray, np.ndarray, np.ndarray],
    ) -> np.ndarray:
        counts = counts_in_halfplanes(self.points, coeffs)
        self._stats.majority_queries += len(counts)
        self._stats.count_queries += len(counts)
        return 2 * counts >= self.n

    def query_cost(self) -> QueryStats:
        out = self._stats
        self._stats = QueryStats()
        return out


def is_majority(oracle: MajorityOracle | ExactMajorityOracle, h: Halfplane) -> bool:
    return oracle.is_majority(h)


def query_cost(oracle: MajorityOracle | ExactMajorityOracle) -> QueryStats:
    return oracle.query_cost()


@dataclass(frozen=True)
class LevelHistogram:
    """Dual vertices bucketed by distance from the median level.

    Bucket i >= 1 counts vertices whose level l satisfies
    |l - floor(n/2)| == i - 1, so bucket 1 is the median level itself and the
    cumulative count over i <= k is the number of vertices within k - 1
    levels of the median.
    """

    n: int
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def rows(self) -> list[tuple[int, int, int]]:
        """(i, n_i, cumulative) triples."""
        out = []
        cum = 0
        for d, c in enumerate(self.counts):
            cum += int(c)
            out.append((d + 1, int(c), cum))
        return out


def level_histogram(points: Sequence[Point]) -> LevelHistogram:
    """Histogram over all C(n, 2) dual vertices, brute force.

    Requires pairwise-distinct x-coordinates (otherwise some pairs have no
    dual vertex).  Intended for n <= 512.
    """
    n = len(points)
    if n < 2:
        return LevelHistogram(n, np.zeros(1, dtype=np.int64))
    levels, _, _ = pair_vertex_levels(points)
    dist = np.abs(levels - median_level_index(n))
    counts = np.bincount(dist, minlength=median_level_index(n) + 1)
    return LevelHistogram(n, counts.astype(np.int64))
