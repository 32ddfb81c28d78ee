from collections import defaultdict

import numpy as np

from conftest import rand_points, random_halfplanes
from majdepth.geometry import count_in_halfplane_naive, halfplane_arrays
from majdepth.lowcross import (
    EdgeSet,
    classify_edges,
    crossing_number,
    crossing_numbers_bulk,
    matching_for_points,
    matching_from_path,
    path_from_tree,
    spanning_tree,
    unmatched_ids,
)
from majdepth.ptree import build_partition_tree


def _components(n, edges):
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for u, v in edges:
        parent[find(u)] = find(v)
    return len({find(i) for i in range(n)})


class TestSpanningTree:
    def test_is_spanning_tree(self):
        for seed, n in ((0, 2), (1, 7), (2, 64), (3, 129)):
            pts = rand_points(np.random.default_rng(seed), n)
            tree_edges = spanning_tree(build_partition_tree(pts))
            assert tree_edges.kind == "tree"
            assert len(tree_edges) == n - 1
            assert _components(n, tree_edges.edges) == 1
            assert all(u < v for u, v in tree_edges.edges)

    def test_deterministic(self):
        pts = rand_points(np.random.default_rng(4), 50)
        a = spanning_tree(build_partition_tree(pts))
        b = spanning_tree(build_partition_tree(pts))
        assert a == b


class TestPath:
    def test_hamiltonian_path(self):
        for seed, n in ((5, 2), (6, 33), (7, 100)):
            pts = rand_points(np.random.default_rng(seed), n)
            tree_edges = spanning_tree(build_partition_tree(pts))
            path = path_from_tree(tree_edges, range(n))
            assert path.kind == "path"
            assert len(path) == n - 1
            assert _components(n, path.edges) == 1
            degree = defaultdict(int)
            for u, v in path.edges:
                degree[u] += 1
                degree[v] += 1
            assert max(degree.values()) <= 2

    def test_path_input_reproduces_itself(self):
        # feeding a path back in finds the same traversal
        edges = EdgeSet(((0, 1), (1, 2), (2, 3)), "tree")
        path = path_from_tree(edges, range(4))
        assert set(path.edges) == set(edges.edges)


class TestMatching:
    def test_vertex_disjoint_and_near_perfect(self):
        for seed, n in ((8, 2), (9, 25), (10, 100), (11, 101)):
            pts = rand_points(np.random.default_rng(seed), n)
            matching, _tree = matching_for_points(pts)
            assert matching.kind == "matching"
            seen = set()
            for u, v in matching.edges:
                assert u not in seen and v not in seen
                seen.update((u, v))
            assert len(matching) == n // 2
            rest = unmatched_ids(matching, range(n))
            assert len(rest) == n % 2
            assert set(rest) | seen == set(range(n))

    def test_alternate_path_edges(self):
        path = EdgeSet(((4, 7), (7, 1), (1, 3), (3, 9), (9, 0)), "path")
        matching = matching_from_path(path)
        assert matching.edges == ((4, 7), (1, 3), (9, 0))


class TestCrossings:
    def test_bulk_matches_scalar(self):
        rng = np.random.default_rng(12)
        pts = rand_points(rng, 60)
        matching, _ = matching_for_points(pts)
        hs = random_halfplanes(rng, 30)
        bulk = crossing_numbers_bulk(matching, pts, halfplane_arrays(hs))
        for k, h in enumerate(hs):
            assert bulk[k] == crossing_number(matching, pts, h)

    def test_counting_identity(self):
        # 2 * (edges inside) + (edges crossed) + (unmatched inside) = |h n S|
        rng = np.random.default_rng(13)
        for n in (9, 24, 61):
            pts = rand_points(rng, n)
            matching, _ = matching_for_points(pts)
            rest = unmatched_ids(matching, range(n))
            for h in random_halfplanes(rng, 25):
                inside, crossed = classify_edges(matching, pts, h)
                loose = sum(1 for i in rest if h.contains(pts[i]))
                assert 2 * inside + crossed + loose == count_in_halfplane_naive(pts, h)

    def test_empty_matching(self):
        pts = rand_points(np.random.default_rng(14), 1)
        matching = EdgeSet((), "matching")
        hs = random_halfplanes(np.random.default_rng(15), 3)
        assert crossing_numbers_bulk(matching, pts, halfplane_arrays(hs)).tolist() == [0, 0, 0]
