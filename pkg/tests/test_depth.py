import math
from itertools import combinations

import numpy as np
import pytest

from majdepth.datasets import gen_points
from majdepth.depth import (
    DepthEstimate,
    contributes,
    depth_exact_naive,
    depth_exact_sweep,
    depth_via_dual_identity,
    estimate_depth,
    pilot_p_hat,
    sample_pair,
    sample_size_for,
)
from majdepth.geometry import (
    DegeneratePairError,
    GeneralPositionError,
    Point,
    orient,
)
from majdepth.medside import ExactMajorityOracle

PENTAGON = [Point(0, 0), Point(4, 0), Point(6, 3), Point(3, 6), Point(-1, 3)]


def off_line_query(points, rng, span=10_000):
    while True:
        q = Point(int(rng.integers(-span, span)), int(rng.integers(-span, span)))
        if all(orient(u, v, q) != 0 for u, v in combinations(points, 2)):
            return q


class TestExactOracles:
    def test_minimum_sizes_contribute_everything(self):
        # below n=5 every closed pair side holds >= n/2 points, so the depth
        # of any query, even a degenerate one, is the full pair count
        rng = np.random.default_rng(70)
        for n in (2, 3, 4):
            for _ in range(10):
                pts = gen_points("uniform-disk", n, seed=int(rng.integers(2**31)))
                q = Point(int(rng.integers(-100, 100)), int(rng.integers(-100, 100)))
                assert depth_exact_naive(pts, q) == math.comb(n, 2)
                assert depth_exact_sweep(pts, q) == math.comb(n, 2)

    def test_pentagon_interior_depth(self):
        q = Point(3, 2)
        assert depth_exact_naive(PENTAGON, q) == 10
        assert depth_exact_sweep(PENTAGON, q) == 10
        assert depth_via_dual_identity(PENTAGON, q) == 10

    def test_pentagon_outside_loses_hull_edges(self):
        # an outer query sits on the minor side of the far hull edges
        q = Point(100, 103)
        d = depth_exact_naive(PENTAGON, q)
        assert d < 10
        assert depth_exact_sweep(PENTAGON, q) == d

    def test_oracles_agree_on_general_position(self):
        rng = np.random.default_rng(71)
        for t in range(25):
            n = 5 + t
            pts = gen_points("uniform-disk", n, seed=1000 + t)
            q = off_line_query(pts, rng)
            d = depth_exact_naive(pts, q)
            assert depth_exact_sweep(pts, q) == d
            assert depth_via_dual_identity(pts, q) == d

    def test_naive_matches_sweep_on_degenerate_instances(self):
        # collinear triples, shared x, queries on pair lines or on data points
        rng = np.random.default_rng(72)
        for _ in range(30):
            seen = set()
            while len(seen) < 12:
                seen.add((int(rng.integers(0, 9)), int(rng.integers(0, 9))))
            pts = [Point(x, y) for x, y in sorted(seen)]
            q = Point(int(rng.integers(0, 9)), int(rng.integers(0, 9)))
            assert depth_exact_naive(pts, q) == depth_exact_sweep(pts, q)

    def test_query_on_data_point(self):
        pts = [Point(0, 0), Point(1, 1), Point(2, 2), Point(5, 0), Point(0, 5), Point(3, -2)]
        for q in pts:
            assert depth_exact_naive(pts, q) == depth_exact_sweep(pts, q)

    def test_rejects_tiny_and_coincident_inputs(self):
        with pytest.raises(ValueError):
            depth_exact_naive([Point(0, 0)], Point(1, 1))
        with pytest.raises(ValueError):
            depth_exact_sweep([], Point(1, 1))
        dup = [Point(0, 0), Point(0, 0), Point(1, 2)]
        with pytest.raises(DegeneratePairError):
            depth_exact_naive(dup, Point(5, 5))
        with pytest.raises(DegeneratePairError):
            depth_exact_sweep(dup, Point(5, 5))


class TestDualIdentity:
    def test_rejects_collinear_points(self):
        pts = [Point(0, 0), Point(1, 1), Point(2, 2), Point(5, 0), Point(0, 5)]
        with pytest.raises(GeneralPositionError):
            depth_via_dual_identity(pts, Point(3, 1))

    def test_rejects_shared_x(self):
        pts = [Point(0, 0), Point(0, 5), Point(3, 1), Point(7, 2)]
        with pytest.raises(GeneralPositionError):
            depth_via_dual_identity(pts, Point(1, 1))

    def test_rejects_query_on_pair_line(self):
        with pytest.raises(GeneralPositionError, match="pair line"):
            depth_via_dual_identity(PENTAGON, Point(2, 1))  # on (0,0)-(6,3): y = x/2


class TestSamplePair:
    def test_two_points(self):
        rng = np.random.default_rng(73)
        assert all(sample_pair(rng, 2) == (0, 1) for _ in range(20))

    def test_ordered_and_distinct(self):
        rng = np.random.default_rng(74)
        for _ in range(500):
            i, j = sample_pair(rng, 9)
            assert 0 <= i < j < 9

    def test_uniform_over_three_pairs(self):
        rng = np.random.default_rng(75)
        draws = 30_000
        counts = {(0, 1): 0, (0, 2): 0, (1, 2): 0}
        for _ in range(draws):
            counts[sample_pair(rng, 3)] += 1
        tol = 4 * math.sqrt((1 / 3) * (2 / 3) / draws)
        for c in counts.values():
            assert abs(c / draws - 1 / 3) <= tol

    def test_determinism(self):
        a = [sample_pair(np.random.default_rng(76), 30) for _ in range(10)]
        b = [sample_pair(np.random.default_rng(76), 30) for _ in range(10)]
        assert a == b

    def test_rejects_singletons(self):
        with pytest.raises(ValueError):
            sample_pair(np.random.default_rng(0), 1)


class TestContributes:
    def test_query_on_pair_line_always_contributes(self):
        # the two closed sides cover n + 2 >= n + 2 points total, so one of
        # them is always major; a tie can never fail to contribute
        pts = [Point(0, 0), Point(2, 0), Point(1, 5), Point(1, -5), Point(3, 2), Point(-1, 1)]
        oracle = ExactMajorityOracle(pts)
        q = Point(1, 0)  # on the (0,0)-(2,0) line
        assert contributes(pts, q, (0, 1), oracle)

    def test_strict_sides_match_naive_decision(self):
        pts = PENTAGON
        oracle = ExactMajorityOracle(pts)
        q = Point(100, 103)
        d = sum(
            contributes(pts, q, pair, oracle) for pair in combinations(range(5), 2)
        )
        assert d == depth_exact_naive(pts, q)


class FalseOracle:
    """Answers 'not major' to everything; exercises estimator floors."""

    def is_majority_many(self, halfplanes):
        return np.zeros(len(halfplanes), dtype=bool)


class TestEstimator:
    def test_census_equals_naive(self):
        for t in range(8):
            n = 6 + 4 * t
            pts = gen_points("uniform-disk", n, seed=2000 + t)
            q = off_line_query(pts, np.random.default_rng(77 + t))
            est = estimate_depth(pts, q, ExactMajorityOracle(pts), exhaustive=True)
            assert est.r == math.comb(n, 2)
            assert est.d_prime == depth_exact_naive(pts, q)
            assert est.r_prime == est.d_prime
            assert est.exhaustive and est.ties_flagged == 0

    def test_single_sample_unbiased(self):
        # E[d'] = d with r=1: the sampled pair contributes with probability
        # d / C(n,2) and d' is then C(n,2), else 0
        pts = gen_points("uniform-disk", 12, seed=78)
        q = off_line_query(pts, np.random.default_rng(79))
        d = depth_exact_naive(pts, q)
        total = math.comb(12, 2)
        p = d / total
        oracle = ExactMajorityOracle(pts)
        runs = 10_000
        acc = 0.0
        for t in range(runs):
            acc += estimate_depth(pts, q, oracle, r=1, seed=[80, t]).d_prime
        tol = 4 * total * math.sqrt(p * (1 - p) / runs)
        assert abs(acc / runs - d) <= tol

    def test_estimate_range_and_fields(self):
        pts = gen_points("uniform-disk", 40, seed=81)
        q = off_line_query(pts, np.random.default_rng(82))
        est = estimate_depth(pts, q, ExactMajorityOracle(pts), r=250, seed=83)
        assert isinstance(est, DepthEstimate)
        assert est.n == 40 and est.r == 250 and est.seed == 83
        assert 0 <= est.r_prime <= est.r
        assert 0.0 <= est.d_prime <= math.comb(40, 2)
        assert est.p_hat == est.r_prime / est.r

    def test_seed_determinism(self):
        pts = gen_points("uniform-disk", 24, seed=84)
        q = off_line_query(pts, np.random.default_rng(85))
        oracle = ExactMajorityOracle(pts)
        a = estimate_depth(pts, q, oracle, r=50, seed=86)
        b = estimate_depth(pts, q, oracle, r=50, seed=86)
        assert a == b

    def test_ties_flagged_for_query_on_line(self):
        pts = [Point(0, 0), Point(2, 0), Point(1, 5), Point(1, -5), Point(4, 3), Point(-3, 1)]
        q = Point(1, 0)
        est = estimate_depth(pts, q, ExactMajorityOracle(pts), exhaustive=True)
        assert est.ties_flagged >= 1
        assert est.d_prime == depth_exact_naive(pts, q)

    def test_rejects_missing_or_bad_sample_count(self):
        pts = gen_points("uniform-disk", 10, seed=87)
        oracle = ExactMajorityOracle(pts)
        with pytest.raises(ValueError):
            estimate_depth(pts, Point(0, 0), oracle)
        with pytest.raises(ValueError):
            estimate_depth(pts, Point(0, 0), oracle, r=0)

    def test_all_false_oracle_gives_zero(self):
        pts = gen_points("uniform-disk", 10, seed=88)
        est = estimate_depth(pts, Point(0, 0), FalseOracle(), r=40, seed=89)
        assert est.r_prime == 0 and est.d_prime == 0.0


class TestSampleSize:
    def test_reference_value(self):
        assert sample_size_for(0.1, 0.5, c=2.0, n=1024) == 2773

    def test_halving_p_doubles_r(self):
        assert sample_size_for(0.1, 0.25, c=2.0, n=1024) == 2 * 2773

    def test_rejects_bad_parameters(self):
        for args in [(0.0, 0.5), (1.5, 0.5), (0.1, 0.0), (0.1, 1.5)]:
            with pytest.raises(ValueError):
                sample_size_for(*args)
        with pytest.raises(ValueError):
            sample_size_for(0.1, 0.5, c=0.0)
        with pytest.raises(ValueError):
            sample_size_for(0.1, 0.5, n=1)

    def test_pilot_floor(self):
        pts = gen_points("uniform-disk", 10, seed=90)
        p = pilot_p_hat(pts, Point(0, 0), FalseOracle(), r=50, seed=91)
        assert p == 1 / 50
