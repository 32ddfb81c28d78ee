from fractions import Fraction
from itertools import combinations

import pytest

from majdepth.datasets import DISTRIBUTIONS, gen_points
from majdepth.geometry import COORD_BOUND, orient, validate_general_position


class TestGenPoints:
    @pytest.mark.parametrize("distribution", DISTRIBUTIONS)
    def test_deterministic(self, distribution):
        a = gen_points(distribution, 40, seed=7)
        b = gen_points(distribution, 40, seed=7)
        c = gen_points(distribution, 40, seed=8)
        assert a == b
        assert a != c

    @pytest.mark.parametrize("distribution", DISTRIBUTIONS)
    def test_distinct_x_and_in_bounds(self, distribution):
        pts = gen_points(distribution, 64, seed=9)
        assert len(pts) == 64
        xs = [p.x for p in pts]
        assert len(set(xs)) == 64
        assert all(abs(p.x) <= COORD_BOUND and abs(p.y) <= COORD_BOUND for p in pts)

    def test_general_position_enforced_by_default(self):
        # n <= 512 defaults to full general position
        pts = gen_points("uniform-disk", 100, seed=10)
        assert validate_general_position(pts).clean

    def test_general_position_opt_out(self):
        pts = gen_points("uniform-disk", 100, seed=10, ensure_general_position=False)
        xs = [p.x for p in pts]
        assert len(set(xs)) == 100  # distinct x still holds

    def test_gp_flag_changes_acceptance_not_distribution(self):
        forced = gen_points("gaussian", 30, seed=11, ensure_general_position=True)
        assert validate_general_position(forced).clean

    def test_convex_position_is_convex(self):
        pts = gen_points("convex-position", 50, seed=12)
        assert [p.x for p in pts] == sorted(p.x for p in pts)
        for a, b, c in zip(pts, pts[1:], pts[2:]):
            assert orient(a, b, c) > 0  # strictly convex chain
        assert validate_general_position(pts).clean

    def test_convex_position_size_cap(self):
        cap = 2**11 + 1
        assert len(gen_points("convex-position", cap, seed=13)) == cap
        with pytest.raises(ValueError):
            gen_points("convex-position", cap + 1, seed=13)

    def test_no_collinear_triples_when_enforced(self):
        pts = gen_points("grid-jittered", 24, seed=14)
        for a, b, c in combinations(pts, 3):
            assert orient(a, b, c) != 0

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            gen_points("pareto", 10, seed=0)
        with pytest.raises(ValueError):
            gen_points("uniform-disk", -1, seed=0)

    def test_tiny_sizes(self):
        assert gen_points("uniform-disk", 0, seed=0) == []
        assert len(gen_points("uniform-disk", 1, seed=0)) == 1
        two = gen_points("uniform-disk", 2, seed=0)
        assert two[0].x != two[1].x

    def test_slope_table_matches_fractions(self):
        # cross-check the incremental slope filter with a direct scan
        pts = gen_points("uniform-disk", 40, seed=15)
        for anchor in pts[:5]:
            rest = [p for p in pts if p != anchor]
            slopes = [Fraction(p.y - anchor.y, p.x - anchor.x) for p in rest]
            assert len(set(slopes)) == len(slopes)
