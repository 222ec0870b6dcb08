import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from euler_transforms.euler_core import GridSpec, euler_integral
from euler_transforms.geometry import (
    Direction,
    Polygon,
    Scene,
    distance_critical_points,
    height_critical_points,
    is_simple,
    random_disjoint_convex_scene,
    random_star_polygon,
    rasterize,
    scene_eval,
    signed_area,
)


def sampled_loop(poly, per_edge=2000):
    a, b = poly.edges
    t = np.arange(per_edge)[None, :, None] / per_edge
    return (a[:, None, :] + t * (b - a)[:, None, :]).reshape(-1, 2)


def loop_extrema_sum(values):
    """Sum of local maxima minus local minima of a sampled closed loop."""
    v = np.asarray(values)
    prev, nxt = np.roll(v, 1), np.roll(v, -1)
    maxima = v[(v > prev) & (v >= nxt)]
    minima = v[(v < prev) & (v <= nxt)]
    return maxima.sum() - minima.sum(), len(maxima), len(minima)


def signed_sum(cps):
    return sum(c.sign * c.value for c in cps)


seeds = st.integers(0, 2**31 - 1)


class TestPolygon:
    def test_orientation_normalized(self):
        cw = [(0, 0), (0, 1), (1, 1), (1, 0)]
        p = Polygon.ccw(cw)
        assert signed_area(p.vertices) > 0 and p.area == pytest.approx(1.0)

    def test_rejects_clockwise(self):
        with pytest.raises(ValueError):
            Polygon([(0, 0), (0, 1), (1, 1), (1, 0)])

    def test_rejects_self_intersection(self):
        assert not is_simple(np.array([(0, 0), (1, 1), (1, 0), (0, 1)], float))
        with pytest.raises(ValueError):
            Polygon.ccw([(0, 0), (1, 1), (1, 0), (0, 1)])

    def test_rejects_degenerate(self):
        with pytest.raises(ValueError):
            Polygon([(0, 0), (1, 0)])
        with pytest.raises(ValueError):
            Polygon.ccw([(0, 0), (1, 0), (2, 0)])

    def test_closing_vertex_dropped(self):
        assert len(Polygon([(0, 0), (1, 0), (0, 1), (0, 0)]).vertices) == 3

    def test_regular_and_rectangle(self):
        hexagon = Polygon.regular((1, 2), 1.0, 6)
        assert hexagon.perimeter == pytest.approx(6.0)
        sq = Polygon.rectangle((0, 0), 0.5, 0.25, math.pi / 6)
        assert sq.area == pytest.approx(0.5)

    def test_transforms(self, unit_square):
        assert unit_square.scaled(3).area == pytest.approx(9.0)
        assert unit_square.translated((2, 0)).bbox() == pytest.approx((1.5, -0.5, 2.5, 0.5))
        assert unit_square.rotated(math.pi / 4).bbox()[2] == pytest.approx(math.sqrt(0.5))

    @given(seeds, st.integers(5, 12))
    def test_star_polygons_are_simple(self, seed, n):
        p = random_star_polygon(np.random.default_rng(seed), n)
        assert is_simple(p.vertices) and signed_area(p.vertices) > 0


class TestSceneEval:
    def test_inside_outside_boundary(self, unit_square):
        s = Scene.of(unit_square)
        vals = scene_eval(s, np.array([0.0, 0.5, 0.7]), np.array([0.0, 0.0, 0.0]))
        assert vals.tolist() == [1, 1, 0]

    def test_shared_edge_counts_twice(self):
        a = Polygon.rectangle((-0.5, 0), 0.5, 0.5)
        b = Polygon.rectangle((0.5, 0), 0.5, 0.5)
        s = Scene.of(a, b)
        assert scene_eval(s, 0.0, 0.0) == 2 and scene_eval(s, 0.3, 0.0) == 1

    def test_weights(self, unit_square):
        assert scene_eval(Scene(((unit_square, 3),)), 0.1, 0.1) == 3

    def test_reflex_vertex_region(self, l_shape):
        assert scene_eval(Scene.of(l_shape), 1.5, 1.5) == 0
        assert scene_eval(Scene.of(l_shape), 0.5, 1.5) == 1

    def test_rejects_bad_weight(self, unit_square):
        with pytest.raises(ValueError):
            Scene(((unit_square, 0),))


class TestRasterize:
    def test_disk_count(self, disk_scene):
        h = rasterize(disk_scene, GridSpec(64, 64, (0, 0), 1 / 64))
        assert euler_integral(h) == 1
        area = h.values.sum() / 64**2
        assert area == pytest.approx(math.pi * 0.09, rel=0.02)

    def test_samples_scene_eval_at_centers(self, l_shape):
        scene = Scene.of(l_shape.translated((0.3, 0.3)))
        grid = GridSpec(30, 30, (0, 0), 0.1)
        h = rasterize(scene, grid)
        xs, ys = grid.centers()
        assert np.array_equal(h.values, scene_eval(scene, xs, ys))

    def test_requires_zero_margin(self, disk_scene):
        with pytest.raises(ValueError):
            rasterize(disk_scene, GridSpec(10, 10, (0.2, 0.2), 0.05))

    @given(seeds, st.integers(1, 5))
    def test_disjoint_scene_counts(self, seed, k):
        scene = random_disjoint_convex_scene(np.random.default_rng(seed), k, (0.05, 0.05, 0.95, 0.95))
        assert euler_integral(rasterize(scene, GridSpec(200, 200, (0, 0), 1 / 200))) == k


class TestDistanceCriticalPoints:
    def test_square_center(self, unit_square):
        cps = distance_critical_points(unit_square, (0, 0))
        assert sorted(c.kind for c in cps) == ["max"] * 4 + ["min"] * 4
        assert signed_sum(cps) == pytest.approx(4 * math.sqrt(0.5) - 4 * 0.5)
        assert all(c.side == "+" for c in cps)

    def test_far_point(self, unit_square):
        # both vertical edges carry a perpendicular-foot minimum
        cps = distance_critical_points(unit_square, (10.0, 0.3))
        assert sorted(c.kind for c in cps) == ["max", "max", "min", "min"]
        expected = math.hypot(10.5, 0.2) + math.hypot(10.5, 0.8) - 9.5 - 10.5
        assert signed_sum(cps) == pytest.approx(expected)

    def test_outside_point_sides(self, unit_square):
        cps = {round(c.value, 9): c for c in distance_critical_points(unit_square, (2.0, 0.1))}
        # the facing edge is on the - side, the far edge and far vertices on +
        assert cps[1.5].kind == "min" and cps[1.5].side == "-"
        assert cps[2.5].kind == "min" and cps[2.5].side == "+"
        assert all(c.side == "+" for c in cps.values() if c.kind == "max")

    def test_triangle_inside(self):
        tri = Polygon([(0, 0), (4, 0), (0, 3)])
        cps = distance_critical_points(tri, (1, 1))
        assert sum(c.kind == "max" for c in cps) == 3
        assert sum(c.kind == "min" for c in cps) == 3

    def test_regular_polygon_center(self):
        n, r = 12, 1.0
        cps = distance_critical_points(Polygon.regular((0, 0), r, n), (0, 0))
        assert signed_sum(cps) == pytest.approx(n * (r - r * math.cos(math.pi / n)))

    @given(seeds, st.integers(5, 12), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
    def test_signed_sum_matches_dense_sampling(self, seed, n, px, py):
        poly = random_star_polygon(np.random.default_rng(seed), n)
        pts = sampled_loop(poly)
        d = np.hypot(pts[:, 0] - px, pts[:, 1] - py)
        expected, n_max, n_min = loop_extrema_sum(d)
        cps = distance_critical_points(poly, (px, py))
        assert signed_sum(cps) == pytest.approx(expected, abs=1e-4)
        # every critical value must be attained on the boundary
        for c in cps:
            assert d.min() - 1e-6 <= c.value <= d.max() + 1e-6

    @given(seeds, st.integers(5, 12), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
    def test_minima_and_maxima_alternate(self, seed, n, px, py):
        poly = random_star_polygon(np.random.default_rng(seed), n)
        cps = distance_critical_points(poly, (px, py))
        assert sum(c.kind == "max" for c in cps) == sum(c.kind == "min" for c in cps) >= 1

    @given(st.integers(3, 40), st.floats(-0.6, 0.6), st.floats(-0.6, 0.6))
    def test_convex_interior_points_are_all_plus(self, n, px, py):
        poly = Polygon.regular((0, 0), 1.0, n)
        assume(scene_eval(Scene.of(poly), px, py) == 1)
        assert all(c.side == "+" for c in distance_critical_points(poly, (px, py)))


class TestHeightCriticalPoints:
    def test_square_axis_plateaus(self, unit_square):
        cps = height_critical_points(unit_square, Direction(0.0))
        assert sorted((c.kind, c.value) for c in cps) == [("max", 0.5), ("min", -0.5)]

    def test_l_shape_axis(self, l_shape):
        cps = height_critical_points(l_shape, Direction(0.0))
        assert signed_sum(cps) == pytest.approx(2.0)
        # the reflex vertical edge at x=1 is a non-extremal plateau
        assert any(c.kind == "plateau" for c in cps)

    def test_l_shape_diagonal_has_two_maxima(self, l_shape):
        cps = height_critical_points(l_shape, Direction(math.pi / 4))
        assert sum(c.kind == "max" for c in cps) == 2
        assert signed_sum(cps) == pytest.approx(2 * math.sqrt(2))

    @given(st.integers(3, 30), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
    def test_convex_width(self, n, phase, angle):
        poly = Polygon.regular((0.3, -0.2), 1.0, n, phase)
        xi = Direction(angle).covector
        h = poly.vertices @ xi
        assert signed_sum(height_critical_points(poly, Direction(angle))) == pytest.approx(h.max() - h.min())

    @given(seeds, st.integers(5, 12), st.floats(0, 2 * math.pi))
    def test_signed_sum_matches_vertex_sampling(self, seed, n, angle):
        poly = random_star_polygon(np.random.default_rng(seed), n)
        h = sampled_loop(poly, 4) @ Direction(angle).covector
        expected, _, _ = loop_extrema_sum(h)
        assert signed_sum(height_critical_points(poly, Direction(angle))) == pytest.approx(expected, abs=1e-9)
