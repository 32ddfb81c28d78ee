"""Exact primitives for planar point sets and their dual line arrangements.

Coordinates are integers bounded by ``COORD_BOUND``, so every predicate here
(and every structure built on top) evaluates in exact integer or rational
arithmetic.  There are no floating-point fast paths.

Conventions fixed in this module and relied on everywhere else:

* A halfplane is the closed set ``{(x, y) : a*x + b*y + c >= 0}``.
* ``halfplane_from_pair`` orients the boundary so that the positive side of a
  non-vertical line is the closed upper halfplane; for a vertical line it is
  the closed right halfplane.
* The dual of the point ``(a, b)`` is the line ``y = a*x - b``; the dual of
  the line ``y = m*x + c`` is the point ``(m, -c)``.  The map preserves
  incidences and vertical order: ``p`` lies strictly above a line ``l``
  exactly when the dual point of ``l`` lies strictly above the dual line of
  ``p``.
* The level of a point in a line arrangement is the number of lines strictly
  above it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

COORD_BOUND = 2**20

__all__ = [
    "COORD_BOUND",
    "GeometryError",
    "CoordinateBoundError",
    "DegeneratePairError",
    "ParallelDualsError",
    "GeneralPositionError",
    "PointFileError",
    "Point",
    "Halfplane",
    "DualLine",
    "DualVertex",
    "orient",
    "halfplane_from_pair",
    "count_in_halfplane_naive",
    "dual_point",
    "dual_vertex",
    "level",
    "pair_vertex_levels",
    "validate_general_position",
    "GeneralPositionReport",
    "as_coord_array",
    "halfplane_arrays",
    "counts_in_halfplanes",
    "pair_halfplane_arrays",
    "read_points",
    "write_points",
]


class GeometryError(Exception):
    """Base class for errors raised by the geometric layers."""


class CoordinateBoundError(GeometryError):
    """A coordinate is outside [-COORD_BOUND, COORD_BOUND] or not an integer."""


class DegeneratePairError(GeometryError):
    """Two coincident points cannot define a boundary line."""


class ParallelDualsError(GeometryError):
    """Two points share an x-coordinate, so their dual lines never meet."""


class GeneralPositionError(GeometryError):
    """The input violates a general-position precondition; it is reported,
    never silently perturbed."""


class PointFileError(GeometryError):
    """A point-set file does not follow the expected format."""


@dataclass(frozen=True, slots=True)
class Point:
    """Integer point.  Construction enforces the coordinate bound, which keeps
    every derived quantity in this package within exact int64 range."""

    x: int
    y: int

    def __post_init__(self) -> None:
        for v in (self.x, self.y):
            if not isinstance(v, int) or isinstance(v, bool):
                raise CoordinateBoundError(f"coordinate {v!r} is not an int")
            if abs(v) > COORD_BOUND:
                raise CoordinateBoundError(
                    f"coordinate {v} exceeds bound {COORD_BOUND}"
                )


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the cross product (q - p) x (r - p).

    +1 when p, q, r make a left turn (r strictly left of the ray p -> q),
    -1 for a right turn, 0 when collinear.  Exact for in-bound coordinates.
    """
    d = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    if d > 0:
        return 1
    if d < 0:
        return -1
    return 0


@dataclass(frozen=True, slots=True)
class Halfplane:
    """Closed halfplane {(x, y) : a*x + b*y + c >= 0}.

    ``source`` optionally records the indices of the point pair whose line is
    the boundary.
    """

    a: int
    b: int
    c: int
    source: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.a == 0 and self.b == 0:
            raise GeometryError("halfplane needs a nonzero normal")

    def value(self, p: Point) -> int:
        return self.a * p.x + self.b * p.y + self.c

    def contains(self, p: Point) -> bool:
        return self.value(p) >= 0

    def flipped(self) -> "Halfplane":
        """The other closed side of the same boundary line."""
        return Halfplane(-self.a, -self.b, -self.c, self.source)


def halfplane_from_pair(
    u: Point, v: Point, side: str = "positive", source: tuple[int, int] | None = None
) -> Halfplane:
    """Closed halfplane bounded by the line through u and v.

    The positive side is the closed upper halfplane; for a vertical boundary
    it is the closed right halfplane.  ``side`` is "positive" or "negative";
    both sides include the boundary line.
    """
    if (u.x, u.y) == (v.x, v.y):
        raise DegeneratePairError(f"coincident points {u} cannot bound a halfplane")
    dx = v.x - u.x
    dy = v.y - u.y
    # Orient the direction so (a, b, c) >= 0 is the upper (or right) side.
    if dx < 0 or (dx == 0 and dy > 0):
        dx, dy = -dx, -dy
        u = v
    a = -dy
    b = dx
    c = -(a * u.x + b * u.y)
    if side == "positive":
        return Halfplane(a, b, c, source)
    if side == "negative":
        return Halfplane(-a, -b, -c, source)
    raise ValueError(f"side must be 'positive' or 'negative', got {side!r}")


def count_in_halfplane_naive(points: Sequence[Point], h: Halfplane) -> int:
    """Reference counter: linear scan, exact.  Every counting structure in
    this package is validated against it."""
    return sum(1 for p in points if h.contains(p))


@dataclass(frozen=True, slots=True)
class DualLine:
    """Line y = slope*x + intercept in the dual plane.  ``source`` is the
    index of the primal point when the line arises from one."""

    slope: Fraction | int
    intercept: Fraction | int
    source: int | None = None

    def y_at(self, x: Fraction | int) -> Fraction | int:
        return self.slope * x + self.intercept


@dataclass(frozen=True, slots=True)
class DualVertex:
    """Intersection of the dual lines of points i and j; equals the dual
    image (slope, -intercept) of the primal line through them."""

    i: int
    j: int
    x: Fraction
    y: Fraction


def dual_point(p: Point, index: int | None = None) -> DualLine:
    """Dual line y = p.x * x - p.y of a primal point."""
    return DualLine(p.x, -p.y, index)


def dual_vertex(points: Sequence[Point], i: int, j: int) -> DualVertex:
    """Crossing of the dual lines of points[i] and points[j].

    Raises ParallelDualsError when the points share an x-coordinate (their
    duals are parallel; the primal line is vertical and has no dual image).
    """
    pi, pj = points[i], points[j]
    if pi.x == pj.x:
        raise ParallelDualsError(
            f"points {i} and {j} share x={pi.x}; dual lines are parallel"
        )
    x = Fraction(pi.y - pj.y, pi.x - pj.x)
    y = pi.x * x - pi.y
    return DualVertex(i, j, x, Fraction(y))


def level(point: tuple[Fraction | int, Fraction | int], lines: Iterable[DualLine]) -> int:
    """Number of lines strictly above the point (exact rational arithmetic)."""
    px, py = point
    return sum(1 for ln in lines if ln.slope * px + ln.intercept > py)


def pair_vertex_levels(points: Sequence[Point]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Levels of all C(n, 2) dual vertices, plus the pair index arrays.

    Returns (levels, I, J) where levels[k] is the number of dual lines
    strictly above the vertex of duals I[k] and J[k], pairs in lexicographic
    order.  Requires pairwise-distinct x-coordinates.  The arithmetic is the
    integer form of ``level``: with the vertex written as (px/d, py/d),
    d > 0, a dual line of the point (a, b) passes strictly above it exactly
    when a*px - b*d > py.
    """
    xs, ys = _coord_columns(points)
    n = len(xs)
    if n != len(set(xs.tolist())):
        raise ParallelDualsError("duplicate x-coordinates; dual vertices missing")
    ii, jj = np.triu_indices(n, k=1)
    d = xs[ii] - xs[jj]
    px = ys[ii] - ys[jj]
    py = xs[jj] * ys[ii] - xs[ii] * ys[jj]
    neg = d < 0
    d = np.where(neg, -d, d)
    px = np.where(neg, -px, px)
    py = np.where(neg, -py, py)
    above = (xs[None, :] * px[:, None] - ys[None, :] * d[:, None]) > py[:, None]
    return above.sum(axis=1).astype(np.int64), ii, jj


@dataclass(frozen=True)
class GeneralPositionReport:
    """Outcome of validate_general_position.  Lists are capped at
    ``max_report`` entries; the *_count fields hold the full totals."""

    n: int
    duplicate_points: tuple[tuple[int, int], ...]
    duplicate_x: tuple[tuple[int, int], ...]
    collinear_triples: tuple[tuple[int, int, int], ...]
    duplicate_point_count: int
    duplicate_x_count: int
    collinear_count: int

    @property
    def distinct_points(self) -> bool:
        return self.duplicate_point_count == 0

    @property
    def distinct_x(self) -> bool:
        return self.duplicate_x_count == 0

    @property
    def no_collinear(self) -> bool:
        return self.collinear_count == 0

    @property
    def ok_for_duals(self) -> bool:
        """Distinct x suffices for dual vertices and the level histogram."""
        return self.distinct_points and self.distinct_x

    @property
    def clean(self) -> bool:
        """Full general position: what the dual-identity oracle needs."""
        return self.ok_for_duals and self.no_collinear


def validate_general_position(
    points: Sequence[Point], max_report: int = 32
) -> GeneralPositionReport:
    """Detect coincident points, shared x-coordinates and collinear triples.

    O(n^2) time and memory (slope table per anchor); intended for the input
    sizes the exact oracles handle.
    """
    n = len(points)
    dup_pts: list[tuple[int, int]] = []
    dup_x: list[tuple[int, int]] = []
    triples: list[tuple[int, int, int]] = []
    dup_pt_count = dup_x_count = tri_count = 0

    seen: dict[tuple[int, int], int] = {}
    for i, p in enumerate(points):
        key = (p.x, p.y)
        if key in seen:
            dup_pt_count += 1
            if len(dup_pts) < max_report:
                dup_pts.append((seen[key], i))
        else:
            seen[key] = i

    seen_x: dict[int, int] = {}
    for i, p in enumerate(points):
        if p.x in seen_x:
            dup_x_count += 1
            if len(dup_x) < max_report:
                dup_x.append((seen_x[p.x], i))
        else:
            seen_x[p.x] = i

    # Each collinear triple i < k < j is found once, at anchor i, when j
    # repeats a slope already seen from i.  A vertical run repeats the None
    # slope.  Coincident points are excluded here; they are reported above.
    for i in range(n):
        pi = points[i]
        slopes: dict[Fraction | None, int] = {}
        for j in range(i + 1, n):
            pj = points[j]
            if (pi.x, pi.y) == (pj.x, pj.y):
                continue
            s = None if pi.x == pj.x else Fraction(pj.y - pi.y, pj.x - pi.x)
            if s in slopes:
                tri_count += 1
                if len(triples) < max_report:
                    triples.append((i, slopes[s], j))
            else:
                slopes[s] = j

    return GeneralPositionReport(
        n=n,
        duplicate_points=tuple(dup_pts),
        duplicate_x=tuple(dup_x),
        collinear_triples=tuple(triples),
        duplicate_point_count=dup_pt_count,
        duplicate_x_count=dup_x_count,
        collinear_count=tri_count,
    )


# --- numpy bridges -----------------------------------------------------------
#
# Bulk helpers for tests and benchmarks.  All stay within int64: coordinates
# are <= 2^20, pair-line coefficients <= 2^21, offsets <= 2^42, so evaluated
# values are <= 2^43.

def as_coord_array(points: Sequence[Point]) -> np.ndarray:
    """(n, 2) int64 coordinate array."""
    out = np.empty((len(points), 2), dtype=np.int64)
    for k, p in enumerate(points):
        out[k, 0] = p.x
        out[k, 1] = p.y
    return out


def _coord_columns(points: Sequence[Point] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(points, np.ndarray):
        return points[:, 0], points[:, 1]
    arr = as_coord_array(points)
    return arr[:, 0], arr[:, 1]


def halfplane_arrays(halfplanes: Sequence[Halfplane]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coefficient vectors (a, b, c) of a halfplane batch."""
    a = np.fromiter((h.a for h in halfplanes), dtype=np.int64, count=len(halfplanes))
    b = np.fromiter((h.b for h in halfplanes), dtype=np.int64, count=len(halfplanes))
    c = np.fromiter((h.c for h in halfplanes), dtype=np.int64, count=len(halfplanes))
    return a, b, c


def counts_in_halfplanes(
    points: Sequence[Point] | np.ndarray,
    coeffs: Sequence[Halfplane] | tuple[np.ndarray, np.ndarray, np.ndarray],
) -> np.ndarray:
    """Vectorized companion of count_in_halfplane_naive for halfplane batches.

    Cross-checked against the scalar reference in the test suite.
    """
    xs, ys = _coord_columns(points)
    if isinstance(coeffs, tuple):
        a, b, c = coeffs
    else:
        a, b, c = halfplane_arrays(coeffs)
    vals = a[:, None] * xs[None, :] + b[:, None] * ys[None, :] + c[:, None]
    return (vals >= 0).sum(axis=1).astype(np.int64)


def pair_halfplane_arrays(
    points: Sequence[Point] | np.ndarray,
    ii: np.ndarray,
    jj: np.ndarray,
    flip: bool = False,
    shift: np.ndarray | int = 0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coefficient arrays of the closed halfplanes bounded by point pairs.

    For each pair the value form is orient(u, v, .): a = -(vy - uy),
    b = vx - ux, c = -(a*ux + b*uy).  ``flip`` selects the other closed side;
    ``shift`` is subtracted from c, so shift=1 turns {s >= 0} into the open
    side {s > 0} (the integer form of an epsilon offset).
    """
    xs, ys = _coord_columns(points)
    a = -(ys[jj] - ys[ii])
    b = xs[jj] - xs[ii]
    c = -(a * xs[ii] + b * ys[ii])
    if flip:
        a, b, c = -a, -b, -c
    return a, b, c - shift


# --- point-set files ---------------------------------------------------------
#
# Format: first line n, then n lines "x y" with decimal integer coordinates
# separated by a single space.

def read_points(path: str) -> list[Point]:
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise PointFileError(f"{path}: empty file")
    try:
        n = int(lines[0])
    except ValueError:
        raise PointFileError(f"{path}: line 1 must be the point count") from None
    if n < 0:
        raise PointFileError(f"{path}: negative point count {n}")
    if len(lines) < n + 1:
        raise PointFileError(f"{path}: expected {n} points, file has {len(lines) - 1}")
    pts: list[Point] = []
    for k in range(1, n + 1):
        parts = lines[k].split(" ")
        if len(parts) != 2:
            raise PointFileError(f"{path}: line {k + 1}: expected 'x y'")
        try:
            x, y = int(parts[0]), int(parts[1])
        except ValueError:
            raise PointFileError(f"{path}: line {k + 1}: non-integer coordinate") from None
        try:
            pts.append(Point(x, y))
        except CoordinateBoundError as exc:
            raise PointFileError(f"{path}: line {k + 1}: {exc}") from None
    return pts


def write_points(path: str, points: Sequence[Point]) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{len(points)}\n")
        for p in points:
            fh.write(f"{p.x} {p.y}\n")
