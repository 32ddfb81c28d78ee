import numpy as np
import pytest

from majdepth.geometry import (
    Point,
    count_in_halfplane_naive,
    counts_in_halfplanes,
    halfplane_from_pair,
    pair_halfplane_arrays,
)
from majdepth.halving import random_pair_halfplanes
from majdepth.ptree import build_partition_tree

from conftest import rand_points, random_halfplanes


class TestBuild:
    def test_leaf_and_count_invariants(self):
        rng = np.random.default_rng(0)
        pts = rand_points(rng, 77)
        tree = build_partition_tree(pts)
        assert tree.node_count(0) == 77
        # every internal node's count is the sum of its children's
        for nid in range(tree.num_nodes):
            left, right = tree.children(nid)
            if tree.is_leaf(nid):
                assert tree.node_count(nid) <= 1
            else:
                assert tree.node_count(nid) == tree.node_count(left) + tree.node_count(right)

    def test_balanced_depth(self):
        pts = rand_points(np.random.default_rng(1), 256)
        tree = build_partition_tree(pts)
        assert tree.depth() <= 10  # ceil(log2 256) + 2 slack for the median split

    def test_representative_is_min_id(self):
        pts = rand_points(np.random.default_rng(2), 33)
        tree = build_partition_tree(pts)
        assert tree.node_rep(0) == 0

    def test_subset_ids(self):
        pts = rand_points(np.random.default_rng(3), 20)
        ids = np.array([3, 5, 7, 11, 13])
        tree = build_partition_tree(pts, ids=ids)
        assert tree.node_count(0) == 5
        h = halfplane_from_pair(Point(-9000, 0), Point(9000, 1), "positive")
        want = sum(1 for i in ids if h.contains(pts[i]))
        assert tree.count(h) == want


class TestCount:
    def test_matches_naive(self):
        rng = np.random.default_rng(4)
        pts = rand_points(rng, 50)
        tree = build_partition_tree(pts)
        for h in random_halfplanes(rng, 60):
            assert tree.count(h) == count_in_halfplane_naive(pts, h)

    def test_single_point_and_tiny_sets(self):
        for n in (1, 2, 3):
            pts = rand_points(np.random.default_rng(n), n)
            tree = build_partition_tree(pts)
            h = halfplane_from_pair(Point(0, -9999), Point(1, -9999), "positive")
            assert tree.count(h) == count_in_halfplane_naive(pts, h)

    def test_count_many_matches_scalar_and_visits(self):
        rng = np.random.default_rng(5)
        pts = rand_points(rng, 64)
        tree = build_partition_tree(pts)
        hs = random_halfplanes(rng, 40)
        counts, visited = tree.count_many(hs)
        assert counts.tolist() == counts_in_halfplanes(pts, hs).tolist()
        for k, h in enumerate(hs):
            c, v = tree.count_with_cost(h)
            assert c == counts[k]
            assert v == visited[k]

    def test_visited_vs_crossed(self):
        # every visited node beyond the root is a child of a crossed node,
        # so visits <= 2 * crossed + 1
        rng = np.random.default_rng(6)
        pts = rand_points(rng, 128)
        tree = build_partition_tree(pts)
        for h in random_halfplanes(rng, 40):
            _, v = tree.count_with_cost(h)
            crossed = tree.crossed_node_count(h.a, h.b, h.c)
            assert v <= 2 * crossed + 1

    def test_coefficient_guard(self):
        pts = rand_points(np.random.default_rng(7), 10)
        tree = build_partition_tree(pts)
        a = np.array([2**23], dtype=np.int64)
        b = np.array([1], dtype=np.int64)
        c = np.array([0], dtype=np.int64)
        with pytest.raises(ValueError):
            tree.count_many((a, b, c))

    def test_pair_probe_batch(self):
        rng = np.random.default_rng(8)
        pts = rand_points(rng, 90)
        tree = build_partition_tree(pts)
        coeffs = random_pair_halfplanes(pts, 200, rng)
        counts, _ = tree.count_many(coeffs)
        assert counts.tolist() == counts_in_halfplanes(pts, coeffs).tolist()

    def test_epsilon_shift_drops_boundary(self):
        pts = [Point(0, 0), Point(4, 0), Point(2, 3), Point(2, -3)]
        tree = build_partition_tree(pts)
        ii, jj = np.array([0]), np.array([1])
        closed = pair_halfplane_arrays(pts, ii, jj)
        open_side = pair_halfplane_arrays(pts, ii, jj, shift=1)
        c_closed, _ = tree.count_many(closed)
        c_open, _ = tree.count_many(open_side)
        assert c_closed[0] == 3  # both endpoints and the upper point
        assert c_open[0] == 1
