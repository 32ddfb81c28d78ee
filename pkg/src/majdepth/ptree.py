"""Partition tree for exact halfplane counting.

A deterministic kd-tree: axis alternates with depth, splits at the median
with coordinate ties broken by point index, leaves hold at most one point.
Each node stores the bounding box of its subtree's points, the subtree count,
and the lowest original point index in the subtree (the representative used
by the spanning-tree construction).

Counting a closed halfplane classifies node boxes: fully inside adds the
stored count, fully outside prunes, otherwise descend.  Queries come in a
scalar form (count) and a batched form (count_many) that processes many
halfplanes per node; both visit exactly the same nodes and the test suite
holds them equal.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .geometry import Halfplane, Point, as_coord_array, halfplane_arrays

__all__ = ["PartitionTree", "build_partition_tree", "count", "crossed_node_count"]


class PartitionTree:
    __slots__ = (
        "n",
        "ids",
        "coords",
        "_left",
        "_right",
        "_axis",
        "_count",
        "_rep",
        "_point",
        "_x0",
        "_x1",
        "_y0",
        "_y1",
        "_np",
    )

    def __init__(self, coords: np.ndarray, ids: np.ndarray) -> None:
        self.n = int(len(ids))
        self.ids = ids
        self.coords = coords
        self._left: list[int] = []
        self._right: list[int] = []
        self._axis: list[int] = []
        self._count: list[int] = []
        self._rep: list[int] = []
        self._point: list[int] = []
        self._x0: list[int] = []
        self._x1: list[int] = []
        self._y0: list[int] = []
        self._y1: list[int] = []
        self._np: dict[str, np.ndarray] | None = None
        self._build(ids, 0)

    # -- construction --------------------------------------------------------

    def _new_node(self, idx: np.ndarray) -> int:
        nid = len(self._count)
        k = len(idx)
        self._left.append(-1)
        self._right.append(-1)
        self._axis.append(-1)
        self._count.append(k)
        self._point.append(-1)
        if k:
            sub = self.coords[idx]
            self._x0.append(int(sub[:, 0].min()))
            self._x1.append(int(sub[:, 0].max()))
            self._y0.append(int(sub[:, 1].min()))
            self._y1.append(int(sub[:, 1].max()))
            self._rep.append(int(idx.min()))
        else:
            self._x0.append(0)
            self._x1.append(0)
            self._y0.append(0)
            self._y1.append(0)
            self._rep.append(-1)
        return nid

    def _build(self, idx: np.ndarray, depth: int) -> int:
        nid = self._new_node(idx)
        k = len(idx)
        if k <= 1:
            if k == 1:
                self._point[nid] = int(idx[0])
            return nid
        axis = depth & 1
        coord = self.coords[idx, axis]
        order = np.lexsort((idx, coord))
        sidx = idx[order]
        m = k // 2
        self._axis[nid] = axis
        self._left[nid] = self._build(sidx[:m], depth + 1)
        self._right[nid] = self._build(sidx[m:], depth + 1)
        return nid

    # -- structure accessors (used by the spanning-tree construction) ---------

    @property
    def num_nodes(self) -> int:
        return len(self._count)

    def children(self, nid: int) -> tuple[int, int]:
        return self._left[nid], self._right[nid]

    def is_leaf(self, nid: int) -> bool:
        return self._axis[nid] < 0

    def node_count(self, nid: int) -> int:
        return self._count[nid]

    def node_rep(self, nid: int) -> int:
        return self._rep[nid]

    def depth(self) -> int:
        best = 0
        stack = [(0, 0)]
        while stack:
            nid, d = stack.pop()
            best = max(best, d)
            if self._axis[nid] >= 0:
                stack.append((self._left[nid], d + 1))
                stack.append((self._right[nid], d + 1))
        return best

    # -- queries ---------------------------------------------------------------

    def count(self, h: Halfplane) -> int:
        return self.count_with_cost(h)[0]

    def count_with_cost(self, h: Halfplane) -> tuple[int, int]:
        """Exact |h ∩ points| and the number of nodes visited."""
        a, b, c = h.a, h.b, h.c
        x0, x1, y0, y1 = self._x0, self._x1, self._y0, self._y1
        left, right, axis, cnt = self._left, self._right, self._axis, self._count
        total = 0
        visited = 0
        stack = [0]
        while stack:
            nid = stack.pop()
            visited += 1
            lo = a * (x0[nid] if a >= 0 else x1[nid]) + b * (y0[nid] if b >= 0 else y1[nid]) + c
            if lo >= 0:
                total += cnt[nid]
                continue
            hi = a * (x1[nid] if a >= 0 else x0[nid]) + b * (y1[nid] if b >= 0 else y0[nid]) + c
            if hi < 0:
                continue
            if axis[nid] >= 0:
                stack.append(left[nid])
                stack.append(right[nid])
            # a leaf box is a single point, so lo == hi and we never get here
        return total, visited

    def _arrays(self) -> dict[str, np.ndarray]:
        if self._np is None:
            self._np = {
                "left": np.asarray(self._left, dtype=np.int32),
                "right": np.asarray(self._right, dtype=np.int32),
                "axis": np.asarray(self._axis, dtype=np.int8),
                "count": np.asarray(self._count, dtype=np.int64),
                "x0": np.asarray(self._x0, dtype=np.int64),
                "x1": np.asarray(self._x1, dtype=np.int64),
                "y0": np.asarray(self._y0, dtype=np.int64),
                "y1": np.asarray(self._y1, dtype=np.int64),
            }
        return self._np

    def count_many(
        self,
        coeffs: Sequence[Halfplane] | tuple[np.ndarray, np.ndarray, np.ndarray],
    ) -> tuple[np.ndarray, np.ndarray]:
        """Batched count: (counts, nodes visited) per halfplane.

        Same classification logic as ``count``, vectorized across the query
        batch at each node, so the per-query visit counts match the scalar
        traversal exactly.
        """
        if isinstance(coeffs, tuple):
            a, b, c = coeffs
        else:
            a, b, c = halfplane_arrays(coeffs)
        arr = self._arrays()
        q = len(a)
        counts = np.zeros(q, dtype=np.int64)
        visited = np.zeros(q, dtype=np.int64)
        amax = np.where(a >= 0, a, -a).max(initial=0)
        bmax = np.where(b >= 0, b, -b).max(initial=0)
        if amax > 2**22 or bmax > 2**22 or (np.abs(c).max(initial=0)) > 2**44:
            raise ValueError("halfplane coefficients exceed the exact int64 range")

        def rec(nid: int, sel: np.ndarray) -> None:
            visited[sel] += 1
            sa, sb, sc = a[sel], b[sel], c[sel]
            apos = sa >= 0
            bpos = sb >= 0
            lo = (
                sa * np.where(apos, arr["x0"][nid], arr["x1"][nid])
                + sb * np.where(bpos, arr["y0"][nid], arr["y1"][nid])
                + sc
            )
            hi = (
                sa * np.where(apos, arr["x1"][nid], arr["x0"][nid])
                + sb * np.where(bpos, arr["y1"][nid], arr["y0"][nid])
                + sc
            )
            inside = lo >= 0
            counts[sel[inside]] += arr["count"][nid]
            if arr["axis"][nid] >= 0:
                cross = ~(inside | (hi < 0))
                if cross.any():
                    sub = sel[cross]
                    rec(int(arr["left"][nid]), sub)
                    rec(int(arr["right"][nid]), sub)

        if q:
            rec(0, np.arange(q, dtype=np.int64))
        return counts, visited

    def crossed_node_count(self, a: int, b: int, c: int) -> int:
        """Nodes whose box the line a*x + b*y + c = 0 crosses.

        A box counts as crossed when at least one of the two closed sides of
        the line would have to descend through it, i.e. the box is neither
        fully inside nor fully outside that side.  Crossing is monotone down
        the tree, so only crossed nodes are expanded.
        """
        x0, x1, y0, y1 = self._x0, self._x1, self._y0, self._y1
        left, right, axis = self._left, self._right, self._axis
        crossed = 0
        stack = [0]
        while stack:
            nid = stack.pop()
            lo = a * (x0[nid] if a >= 0 else x1[nid]) + b * (y0[nid] if b >= 0 else y1[nid]) + c
            hi = a * (x1[nid] if a >= 0 else x0[nid]) + b * (y1[nid] if b >= 0 else y0[nid]) + c
            if (lo < 0 <= hi) or (lo <= 0 < hi):
                crossed += 1
                if axis[nid] >= 0:
                    stack.append(left[nid])
                    stack.append(right[nid])
        return crossed


def build_partition_tree(
    points: Sequence[Point] | np.ndarray, ids: np.ndarray | None = None
) -> PartitionTree:
    """Build a tree over points[ids] (default: all of ``points``).

    ``points`` always holds the full coordinate table; ``ids`` selects the
    subset the tree indexes, so trees over halved subsets keep reporting
    original point indices in ``node_rep`` and leaf points.
    """
    coords = points if isinstance(points, np.ndarray) else as_coord_array(points)
    if ids is None:
        ids = np.arange(len(coords), dtype=np.int64)
    else:
        ids = np.asarray(ids, dtype=np.int64)
    return PartitionTree(coords, ids)


def count(tree: PartitionTree, h: Halfplane) -> int:
    return tree.count(h)


def crossed_node_count(tree: PartitionTree, h: Halfplane) -> int:
    """Crossed-node diagnostic for the boundary line of ``h``."""
    return tree.crossed_node_count(h.a, h.b, h.c)
