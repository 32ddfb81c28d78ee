import numpy as np

from majdepth.geometry import Point, halfplane_from_pair


def rand_points(rng: np.random.Generator, n: int, span: int = 10_000) -> list[Point]:
    pts: set[tuple[int, int]] = set()
    while len(pts) < n:
        pts.add((int(rng.integers(-span, span)), int(rng.integers(-span, span))))
    return [Point(x, y) for x, y in sorted(pts)]


def random_halfplanes(rng: np.random.Generator, k: int, span: int = 10_000):
    out = []
    while len(out) < k:
        (ux, uy), (vx, vy) = rng.integers(-span, span, size=(2, 2))
        if (ux, uy) == (vx, vy):
            continue
        side = "positive" if rng.integers(0, 2) else "negative"
        out.append(halfplane_from_pair(Point(int(ux), int(uy)), Point(int(vx), int(vy)), side))
    return out
