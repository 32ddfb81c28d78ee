"""Low-crossing edge structures: spanning tree, path, matching.

Built from a partition tree in three steps, each deterministic:

* spanning tree: post-order over the partition tree; every internal node
  whose children are both nonempty contributes one edge joining the
  lowest-index point of each child subtree;
* path: depth-first discovery order over the spanning tree, started at the
  lowest-index vertex of degree <= 1, neighbors taken in ascending order;
  consecutive discoveries become path edges;
* matching: every second path edge (the 1st, 3rd, ...), which is vertex
  disjoint and has floor(n/2) edges.

A halfplane crosses an edge when it contains exactly one endpoint.  Edges
and vertices are original point indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geometry import Halfplane, Point, as_coord_array
from .ptree import PartitionTree, build_partition_tree

__all__ = [
    "EdgeSet",
    "spanning_tree",
    "path_from_tree",
    "matching_from_path",
    "matching_for_points",
    "unmatched_ids",
    "crossing_number",
    "crossing_numbers_bulk",
    "classify_edges",
]


@dataclass(frozen=True)
class EdgeSet:
    """Point-index pairs plus a tag: "tree", "path" or "matching"."""

    edges: tuple[tuple[int, int], ...]
    kind: str

    def __len__(self) -> int:
        return len(self.edges)

    def endpoint_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        u = np.fromiter((e[0] for e in self.edges), dtype=np.int64, count=len(self.edges))
        v = np.fromiter((e[1] for e in self.edges), dtype=np.int64, count=len(self.edges))
        return u, v


def spanning_tree(tree: PartitionTree) -> EdgeSet:
    edges: list[tuple[int, int]] = []
    stack: list[tuple[int, bool]] = [(0, False)]
    while stack:
        nid, done = stack.pop()
        if tree.is_leaf(nid):
            continue
        lc, rc = tree.children(nid)
        if done:
            if tree.node_count(lc) > 0 and tree.node_count(rc) > 0:
                a, b = tree.node_rep(lc), tree.node_rep(rc)
                edges.append((a, b) if a < b else (b, a))
            continue
        stack.append((nid, True))
        stack.append((rc, False))
        stack.append((lc, False))
    return EdgeSet(tuple(edges), "tree")


def path_from_tree(tree_edges: EdgeSet, ids: Sequence[int] | np.ndarray) -> EdgeSet:
    ids = [int(v) for v in ids]
    if len(ids) <= 1:
        return EdgeSet((), "path")
    adj: dict[int, list[int]] = {v: [] for v in ids}
    for u, v in tree_edges.edges:
        adj[u].append(v)
        adj[v].append(u)
    for v in adj:
        adj[v].sort()
    start = min(v for v in ids if len(adj[v]) <= 1)
    order: list[int] = []
    seen = set()
    stack = [start]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        order.append(v)
        for w in reversed(adj[v]):
            if w not in seen:
                stack.append(w)
    edges = tuple((order[k], order[k + 1]) for k in range(len(order) - 1))
    return EdgeSet(edges, "path")


def matching_from_path(path: EdgeSet) -> EdgeSet:
    return EdgeSet(path.edges[0::2], "matching")


def matching_for_points(
    points: Sequence[Point] | np.ndarray, ids: np.ndarray | None = None
) -> tuple[EdgeSet, PartitionTree]:
    """Partition tree -> spanning tree -> path -> matching, in one call."""
    tree = build_partition_tree(points, ids)
    path = path_from_tree(spanning_tree(tree), tree.ids)
    return matching_from_path(path), tree


def unmatched_ids(matching: EdgeSet, ids: Sequence[int] | np.ndarray) -> list[int]:
    covered = {v for e in matching.edges for v in e}
    return sorted(int(v) for v in ids if int(v) not in covered)


def crossing_number(edges: EdgeSet, points: Sequence[Point], h: Halfplane) -> int:
    return sum(1 for u, v in edges.edges if h.contains(points[u]) != h.contains(points[v]))


def crossing_numbers_bulk(
    edges: EdgeSet,
    points: Sequence[Point] | np.ndarray,
    coeffs: tuple[np.ndarray, np.ndarray, np.ndarray],
) -> np.ndarray:
    """Crossing number of every halfplane in a coefficient batch."""
    coords = points if isinstance(points, np.ndarray) else as_coord_array(points)
    a, b, c = coeffs
    u, v = edges.endpoint_arrays()
    if len(u) == 0:
        return np.zeros(len(a), dtype=np.int64)
    inside = (
        a[:, None] * coords[:, 0][None, :] + b[:, None] * coords[:, 1][None, :] + c[:, None]
    ) >= 0
    return (inside[:, u] != inside[:, v]).sum(axis=1).astype(np.int64)


def classify_edges(edges: EdgeSet, points: Sequence[Point], h: Halfplane) -> tuple[int, int]:
    """(edges inside h, edges crossed by h)."""
    inside = crossed = 0
    for u, v in edges.edges:
        cu, cv = h.contains(points[u]), h.contains(points[v])
        if cu and cv:
            inside += 1
        elif cu != cv:
            crossed += 1
    return inside, crossed
