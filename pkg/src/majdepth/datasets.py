"""Seeded point-set generators.

All generators emit integer points within the coordinate bound and with
pairwise-distinct x-coordinates (rejection).  ``ensure_general_position``
additionally rejects any point collinear with two earlier ones; by default
it is on for n <= 512, where the exact dual-route oracles operate.  The
convex-position generator places points on an integer parabola, which is
general position by construction but caps n at the number of admissible
x-values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

import numpy as np

from .geometry import COORD_BOUND, Point

__all__ = ["DISTRIBUTIONS", "gen_points"]

DISTRIBUTIONS = ("uniform-disk", "gaussian", "grid-jittered", "convex-position")

_GP_DEFAULT_MAX_N = 512
_PARABOLA_HALF_RANGE = 2**10  # y = x^2 stays within the bound


def _uniform_disk(rng: np.random.Generator) -> Iterator[tuple[int, int]]:
    radius = COORD_BOUND - 1
    r2 = radius * radius
    while True:
        x = int(rng.integers(-radius, radius + 1))
        y = int(rng.integers(-radius, radius + 1))
        if x * x + y * y <= r2:
            yield x, y


def _gaussian(rng: np.random.Generator) -> Iterator[tuple[int, int]]:
    scale = COORD_BOUND / 5
    while True:
        x = int(round(rng.normal(0.0, scale)))
        y = int(round(rng.normal(0.0, scale)))
        if abs(x) <= COORD_BOUND and abs(y) <= COORD_BOUND:
            yield x, y


def _grid_jittered(rng: np.random.Generator, n: int) -> Iterator[tuple[int, int]]:
    m = 1
    while m * m < n:
        m += 1
    g = (2 * (COORD_BOUND - 1)) // m
    base = -(g * m) // 2
    cell = 0
    while True:
        cx = cell % m
        cy = (cell // m) % m
        x = base + cx * g + int(rng.integers(0, g))
        y = base + cy * g + int(rng.integers(0, g))
        yield x, y
        cell += 1


def _candidate_stream(distribution: str, rng: np.random.Generator, n: int) -> Iterator[tuple[int, int]]:
    if distribution == "uniform-disk":
        return _uniform_disk(rng)
    if distribution == "gaussian":
        return _gaussian(rng)
    if distribution == "grid-jittered":
        return _grid_jittered(rng, n)
    raise ValueError(f"unknown distribution {distribution!r}")


def _convex_position(rng: np.random.Generator, n: int) -> list[Point]:
    limit = 2 * _PARABOLA_HALF_RANGE + 1
    if n > limit:
        raise ValueError(f"convex-position supports n <= {limit}, got {n}")
    xs = rng.choice(np.arange(-_PARABOLA_HALF_RANGE, _PARABOLA_HALF_RANGE + 1), size=n, replace=False)
    xs = np.sort(xs)
    return [Point(int(x), int(x) * int(x) - 2**19) for x in xs]


def gen_points(
    distribution: str,
    n: int,
    seed: int = 0,
    ensure_general_position: bool | None = None,
) -> list[Point]:
    """n seeded points from the named distribution.

    Distinct x-coordinates always hold; full general position (no collinear
    triple) is enforced when ``ensure_general_position`` is true, defaulting
    to n <= 512.  Enforcement is O(n^2) per accepted point set (slope table
    per anchor).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = np.random.default_rng(seed)
    if distribution == "convex-position":
        return _convex_position(rng, n)
    if distribution not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {distribution!r}")
    if ensure_general_position is None:
        ensure_general_position = n <= _GP_DEFAULT_MAX_N

    stream = _candidate_stream(distribution, rng, n)
    pts: list[Point] = []
    xs_seen: set[int] = set()
    slopes: list[set[Fraction]] = []
    attempts = 0
    max_attempts = 2000 * max(n, 1) + 10_000
    while len(pts) < n:
        attempts += 1
        if attempts > max_attempts:
            raise RuntimeError(
                f"could not place {n} admissible points after {attempts} draws"
            )
        x, y = next(stream)
        if x in xs_seen:
            continue
        if ensure_general_position:
            ok = True
            new_slopes = []
            for k, p in enumerate(pts):
                s = Fraction(y - p.y, x - p.x)
                if s in slopes[k]:
                    ok = False
                    break
                new_slopes.append(s)
            if not ok:
                continue
            for k, s in enumerate(new_slopes):
                slopes[k].add(s)
            slopes.append(set())
        xs_seen.add(x)
        pts.append(Point(x, y))
    return pts
