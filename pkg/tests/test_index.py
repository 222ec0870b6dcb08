import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from euler_transforms.geometry import Direction, Polygon, Scene, random_star_polygon, scene_eval
from euler_transforms.index import (
    ball_bessel_closed_form,
    bessel_index,
    bessel_index_many,
    bessel_index_split,
    fourier_index,
)
from euler_transforms.euler_core import CircularProfile, circle_integral_floor

seeds = st.integers(0, 2**31 - 1)
coords = st.floats(-1.5, 1.5)


def sampled_bessel(poly, x, per_edge=3000):
    """Floor integral of the sampled boundary distance (independent path)."""
    a, b = poly.edges
    t = np.arange(per_edge)[None, :, None] / per_edge
    pts = (a[:, None, :] + t * (b - a)[:, None, :]).reshape(-1, 2)
    return circle_integral_floor(CircularProfile(np.hypot(pts[:, 0] - x[0], pts[:, 1] - x[1])))


class TestBesselIndex:
    def test_unit_square_center(self, unit_square):
        assert bessel_index(Scene.of(unit_square), (0, 0)) == pytest.approx(2 * math.sqrt(2) - 2)

    def test_far_point_approaches_width(self, unit_square):
        v = bessel_index(Scene.of(unit_square), (1000.0, 0.0))
        assert v == pytest.approx(1.0, rel=1e-3)

    def test_weights_and_additivity(self, unit_square):
        a = unit_square
        b = Polygon.regular((3, 0), 0.5, 9)
        x = (0.7, -0.4)
        s = Scene(((a, 2), (b, 1)))
        assert bessel_index(s, x) == pytest.approx(2 * bessel_index(Scene.of(a), x) + bessel_index(Scene.of(b), x))

    def test_many(self, unit_square):
        pts = np.array([[0, 0], [2, 2]])
        s = Scene.of(unit_square)
        np.testing.assert_allclose(bessel_index_many(s, pts), [bessel_index(s, p) for p in pts])

    @given(seeds, st.integers(5, 12), coords, coords)
    def test_matches_sampled_boundary(self, seed, n, px, py):
        poly = random_star_polygon(np.random.default_rng(seed), n)
        assert bessel_index(Scene.of(poly), (px, py)) == pytest.approx(sampled_bessel(poly, (px, py)), abs=1e-4)

    @given(seeds, st.integers(5, 12), coords, coords)
    def test_split_difference_is_index(self, seed, n, px, py):
        s = Scene.of(random_star_polygon(np.random.default_rng(seed), n))
        plus, minus = bessel_index_split(s, (px, py))
        assert plus - minus == pytest.approx(bessel_index(s, (px, py)), abs=1e-12)

    @given(st.integers(3, 40), st.floats(0, 1), coords, coords)
    def test_convex_inside_has_no_minus_part(self, n, phase, px, py):
        poly = Polygon.regular((0, 0), 1.2, n, phase)
        assume(scene_eval(Scene.of(poly), px, py) == 1)
        plus, minus = bessel_index_split(Scene.of(poly), (px, py))
        assert minus == 0.0
        assert plus == pytest.approx(bessel_index(Scene.of(poly), (px, py)))

    @given(seeds, st.integers(5, 12), coords, coords)
    def test_nonnegative_for_indicators(self, seed, n, px, py):
        s = Scene.of(random_star_polygon(np.random.default_rng(seed), n))
        assert bessel_index(s, (px, py)) >= -1e-12


class TestBall:
    def test_closed_form(self):
        assert ball_bessel_closed_form((0, 0), 0.3, (0.1, 0)) == pytest.approx(0.2)
        assert ball_bessel_closed_form((0, 0), 0.3, (5, 5)) == pytest.approx(0.6)
        with pytest.raises(ValueError):
            ball_bessel_closed_form((0, 0), 0.0, (1, 1))

    def test_ngon_matches_closed_form(self):
        n, r = 512, 0.3
        poly = Polygon.regular((0.5, 0.5), r, n)
        # every edge sags inward by r(1 - cos(pi/n)); at the center all n count
        tol = n * r * (1 - math.cos(math.pi / n)) + 1e-12
        assert bessel_index(Scene.of(poly), (0.5, 0.5)) == pytest.approx(tol, rel=1e-9)
        for x in [(0.6, 0.5), (0.75, 0.7), (2.0, -1.0)]:
            assert bessel_index(Scene.of(poly), x) == pytest.approx(
                ball_bessel_closed_form((0.5, 0.5), r, x), abs=tol
            )

    @given(st.floats(0, 0.29), st.floats(0.001, 0.3))
    def test_monotone_in_distance(self, r, step):
        disk = Scene.of(Polygon.regular((0, 0), 0.3, 256))
        near = bessel_index(disk, (r, 0.0))
        far = bessel_index(disk, (r + step, 0.0))
        assert far >= near - 1e-3


class TestFourierIndex:
    def test_unit_square_exact(self, unit_square):
        assert fourier_index(Scene.of(unit_square), Direction(0.0)) == 1.0

    @given(st.integers(3, 30), st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi))
    def test_convex_equals_width(self, n, phase, angle):
        poly = Polygon.regular((1.0, 2.0), 0.7, n, phase)
        h = poly.vertices @ Direction(angle).covector
        assert fourier_index(Scene.of(poly), Direction(angle)) == pytest.approx(h.max() - h.min())

    def test_l_shape(self, l_shape):
        s = Scene.of(l_shape)
        assert fourier_index(s, Direction(0.0)) == pytest.approx(2.0)
        assert fourier_index(s, Direction(math.pi / 4)) == pytest.approx(2 * math.sqrt(2))

    @given(seeds, st.integers(5, 12), st.floats(0, 2 * math.pi), st.floats(-5, 5), st.floats(-5, 5))
    def test_translation_invariant(self, seed, n, angle, tx, ty):
        poly = random_star_polygon(np.random.default_rng(seed), n)
        d = Direction(angle)
        a = fourier_index(Scene.of(poly), d)
        b = fourier_index(Scene.of(poly.translated((tx, ty))), d)
        assert a == pytest.approx(b, abs=1e-9)

    @given(st.integers(3, 20), st.floats(0, 2 * math.pi), st.integers(0, 7))
    def test_far_bessel_limit(self, n, phase, k):
        poly = Polygon.regular((0, 0), 0.5, n, phase)
        u = Direction(2 * math.pi * k / 8)
        lam = 1000.0
        far = bessel_index(Scene.of(poly), lam * u.covector)
        assert far == pytest.approx(fourier_index(Scene.of(poly), u), rel=1e-3)
