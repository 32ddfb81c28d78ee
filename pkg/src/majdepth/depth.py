"""Majority depth: three exact oracles and the pair-sampling estimator.

The majority depth of a query point q in S is the number of unordered pairs
{x, y} of S such that q lies in a closed major side of the line through x
and y (a closed halfplane with the pair on its boundary holding at least n/2
points).  A query point on the pair's line lies in both closed sides and
contributes when either is major; such pairs are flagged as ties.

Oracles, all exact and mutually cross-checked:

* ``depth_exact_naive``: scan every pair, count its sides directly (O(n^3));
* ``depth_exact_sweep``: per anchor, one angular sweep maintains the strict
  side counts of all lines through the anchor (O(n^2 log n));
* ``depth_via_dual_identity``: classify every dual vertex by its level and
  by its side of the dual line q*; the depth is C(n, 2) minus the vertices
  sandwiched between q* and the median level.  Requires general position
  and reports violations instead of perturbing.

The estimator samples pairs uniformly with replacement and scales the
contributing fraction by C(n, 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cmp_to_key
from typing import Sequence

import numpy as np

from .geometry import (
    DegeneratePairError,
    GeneralPositionError,
    Halfplane,
    Point,
    halfplane_from_pair,
    orient,
    pair_vertex_levels,
    validate_general_position,
)
from .medside import ExactMajorityOracle, MajorityOracle, is_major_count

__all__ = [
    "depth_exact_naive",
    "depth_exact_sweep",
    "depth_via_dual_identity",
    "sample_pair",
    "contributes",
    "DepthEstimate",
    "estimate_depth",
    "sample_size_for",
    "pilot_p_hat",
]


def _check_input(points: Sequence[Point]) -> int:
    n = len(points)
    if n < 2:
        raise ValueError(f"majority depth needs at least 2 points, got {n}")
    return n


def depth_exact_naive(points: Sequence[Point], q: Point) -> int:
    """Reference oracle: for every pair, count both strict sides and decide.

    Raises DegeneratePairError on coincident points (their pair has no
    boundary line).
    """
    n = _check_input(points)
    depth = 0
    for i in range(n):
        u = points[i]
        for j in range(i + 1, n):
            v = points[j]
            if (u.x, u.y) == (v.x, v.y):
                raise DegeneratePairError(f"points {i} and {j} coincide")
            left = right = 0
            for p in points:
                o = orient(u, v, p)
                if o > 0:
                    left += 1
                elif o < 0:
                    right += 1
            on = n - left - right
            oq = orient(u, v, q)
            if oq >= 0 and is_major_count(left + on, n):
                depth += 1
            elif oq <= 0 and is_major_count(right + on, n):
                depth += 1
    return depth


def _direction_cmp(u: tuple[int, int], v: tuple[int, int]) -> int:
    hu = 0 if (u[1] > 0 or (u[1] == 0 and u[0] > 0)) else 1
    hv = 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1
    if hu != hv:
        return hu - hv
    c = u[0] * v[1] - u[1] * v[0]
    if c > 0:
        return -1
    if c < 0:
        return 1
    return 0


def depth_exact_sweep(points: Sequence[Point], q: Point) -> int:
    """Angular-sweep oracle, identical value to depth_exact_naive.

    For each anchor a the other points are sorted by direction around a;
    a rotating two-pointer window maintains the number of points strictly
    left of the oriented line a -> y, and collinear runs supply the on-line
    counts, so each ordered pair is decided in O(1) amortized.
    """
    n = _check_input(points)
    total_ordered = 0
    for ai in range(n):
        a = points[ai]
        dirs: list[tuple[int, int]] = []
        for k in range(n):
            if k == ai:
                continue
            p = points[k]
            if (p.x, p.y) == (a.x, a.y):
                raise DegeneratePairError(f"points {ai} and {k} coincide")
            dirs.append((p.x - a.x, p.y - a.y))
        dirs.sort(key=cmp_to_key(_direction_cmp))

        groups: list[tuple[tuple[int, int], int]] = []
        for d in dirs:
            if groups and _direction_cmp(groups[-1][0], d) == 0:
                groups[-1] = (groups[-1][0], groups[-1][1] + 1)
            else:
                groups.append((d, 1))
        G = len(groups)
        pref = [0]
        for g in range(2 * G):
            pref.append(pref[-1] + groups[g % G][1])

        t = 1
        for g in range(G):
            dg = groups[g][0]
            if t < g + 1:
                t = g + 1
            while t < g + G:
                dt = groups[t % G][0]
                if dg[0] * dt[1] - dg[1] * dt[0] > 0:
                    t += 1
                else:
                    break
            left = pref[t] - pref[g + 1]
            opp = 0
            if t < g + G:
                dt = groups[t % G][0]
                if dg[0] * dt[1] - dg[1] * dt[0] == 0:
                    opp = groups[t % G][1]
            on = 1 + groups[g][1] + opp
            right = n - on - left
            major_left = is_major_count(left + on, n)
            major_right = is_major_count(right + on, n)
            oq = (q.x - a.x) * dg[1] - (q.y - a.y) * dg[0]
            # oq > 0 puts q strictly right of a -> a+dg; cross(dg, q-a) = -oq.
            side = -oq
            if side >= 0 and major_left:
                total_ordered += groups[g][1]
            elif side <= 0 and major_right:
                total_ordered += groups[g][1]
    if total_ordered % 2:
        raise AssertionError("ordered contribution count must be even")
    return total_ordered // 2


def depth_via_dual_identity(points: Sequence[Point], q: Point) -> int:
    """Dual-route oracle: C(n, 2) minus the vertices sandwiched between q*
    and the median level.

    A vertex of duals i*, j* has level l = points strictly below the primal
    pair line.  With exactly two points on that line (general position), the
    closed upper side is major iff 2*l <= n and the closed lower side is
    major iff 2*l >= n - 4; the vertex lies strictly above q* exactly when q
    lies strictly above the pair line.  A vertex fails to contribute, i.e.
    is sandwiched, when it sits above q* but its upper side is minor, or
    below q* with a minor lower side.

    Requires general position (distinct x, no collinear triple, q on no pair
    line); violations raise GeneralPositionError.
    """
    n = _check_input(points)
    report = validate_general_position(points)
    if not report.clean:
        raise GeneralPositionError(
            "general position violated: "
            f"{report.duplicate_point_count} duplicate points, "
            f"{report.duplicate_x_count} shared x-coordinates, "
            f"{report.collinear_count} collinear triples"
        )
    levels, ii, jj = pair_vertex_levels(points)
    xs = np.fromiter((p.x for p in points), dtype=np.int64, count=n)
    ys = np.fromiter((p.y for p in points), dtype=np.int64, count=n)
    d = xs[ii] - xs[jj]
    px = ys[ii] - ys[jj]
    py = xs[jj] * ys[ii] - xs[ii] * ys[jj]
    neg = d < 0
    d = np.where(neg, -d, d)
    px = np.where(neg, -px, px)
    py = np.where(neg, -py, py)
    qstar_at_vx = q.x * px - q.y * d
    if (py == qstar_at_vx).any():
        raise GeneralPositionError("query point lies on a pair line")
    above_qstar = py > qstar_at_vx
    upper_major = 2 * levels <= n
    lower_major = 2 * levels >= n - 4
    sandwiched = np.where(above_qstar, ~upper_major, ~lower_major)
    t = int(sandwiched.sum())
    return n * (n - 1) // 2 - t


def sample_pair(rng: np.random.Generator, n: int) -> tuple[int, int]:
    """Uniform unordered pair of distinct indices, i < j."""
    if n < 2:
        raise ValueError("need n >= 2 to sample a pair")
    while True:
        i = int(rng.integers(0, n))
        j = int(rng.integers(0, n))
        if i != j:
            return (i, j) if i < j else (j, i)


def contributes(
    points: Sequence[Point],
    q: Point,
    pair: tuple[int, int],
    oracle: MajorityOracle | ExactMajorityOracle,
) -> bool:
    """Does the pair contribute to the depth of q, per the oracle's majority
    test?  A query point on the pair line tests both closed sides."""
    i, j = pair
    u, v = points[i], points[j]
    h = halfplane_from_pair(u, v, "positive", source=(i, j))
    s = h.value(q)
    if s > 0:
        return oracle.is_majority(h)
    if s < 0:
        return oracle.is_majority(h.flipped())
    return oracle.is_majority(h) or oracle.is_majority(h.flipped())


@dataclass(frozen=True)
class DepthEstimate:
    """Result of estimate_depth: d_prime = (r_prime / r) * C(n, 2)."""

    n: int
    r: int
    r_prime: int
    d_prime: float
    p_hat: float
    ties_flagged: int
    seed: int | None
    exhaustive: bool


def _eval_pairs(
    points: Sequence[Point],
    q: Point,
    pairs: list[tuple[int, int]],
    oracle: MajorityOracle | ExactMajorityOracle,
) -> tuple[int, int]:
    """(contributing pairs, tie pairs), batching the majority queries.

    Builds the closed side containing q for each sampled pair (both sides on
    a tie) and sends one batch to the oracle; per-pair combination mirrors
    ``contributes`` exactly.
    """
    halfplanes: list[Halfplane] = []
    spans: list[tuple[int, int]] = []
    ties = 0
    for i, j in pairs:
        h = halfplane_from_pair(points[i], points[j], "positive", source=(i, j))
        s = h.value(q)
        start = len(halfplanes)
        if s > 0:
            halfplanes.append(h)
        elif s < 0:
            halfplanes.append(h.flipped())
        else:
            ties += 1
            halfplanes.append(h)
            halfplanes.append(h.flipped())
        spans.append((start, len(halfplanes)))
    if not halfplanes:
        return 0, 0
    answers = oracle.is_majority_many(halfplanes)
    hits = sum(1 for lo, hi in spans if bool(answers[lo:hi].any()))
    return hits, ties


def estimate_depth(
    points: Sequence[Point],
    q: Point,
    oracle: MajorityOracle | ExactMajorityOracle,
    r: int | None = None,
    seed: int | None = 0,
    exhaustive: bool = False,
) -> DepthEstimate:
    """Sample r pairs uniformly with replacement (or enumerate all C(n, 2)
    pairs once with ``exhaustive``) and scale the contributing fraction."""
    n = _check_input(points)
    total_pairs = n * (n - 1) // 2
    if exhaustive:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        if r is None or r < 1:
            raise ValueError("r must be a positive sample count")
        rng = np.random.default_rng(seed)
        pairs = [sample_pair(rng, n) for _ in range(r)]
    hits, ties = _eval_pairs(points, q, pairs, oracle)
    m = len(pairs)
    return DepthEstimate(
        n=n,
        r=m,
        r_prime=hits,
        d_prime=hits * total_pairs / m,
        p_hat=hits / m,
        ties_flagged=ties,
        seed=seed,
        exhaustive=exhaustive,
    )


def sample_size_for(epsilon: float, p_hat: float, c: float = 2.0, n: float = 2) -> int:
    """ceil(c * ln(n) / (epsilon^2 * p_hat)) samples for relative error
    epsilon with failure probability polynomially small in n."""
    if not 0 < epsilon <= 1:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    if not 0 < p_hat <= 1:
        raise ValueError(f"p_hat must be in (0, 1], got {p_hat}")
    if c <= 0:
        raise ValueError(f"c must be positive, got {c}")
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    return math.ceil(c * math.log(n) / (epsilon * epsilon * p_hat))


def pilot_p_hat(
    points: Sequence[Point],
    q: Point,
    oracle: MajorityOracle | ExactMajorityOracle,
    r: int = 100,
    seed: int | None = 0,
) -> float:
    """Pilot estimate of the contributing fraction, floored at 1/r so the
    sample-size formula stays finite."""
    est = estimate_depth(points, q, oracle, r=r, seed=seed)
    return max(est.r_prime, 1) / est.r
