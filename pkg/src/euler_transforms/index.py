"""Closed-form Bessel and Fourier transforms of polygonal scenes.

In the plane the boundary of each polygon is a closed curve, so the
transform of its indicator is the signed sum of the critical values of the
distance (or height) function on that curve: maxima count positively,
minima negatively.  Scenes are handled item by item by linearity.

Only the Euclidean norm is supported here; for other norms the numeric
transforms are authoritative.
"""
from __future__ import annotations

import math

import numpy as np

from .geometry import Direction, Polygon, Scene, distance_critical_points, height_critical_points


def _polygon_bessel(poly: Polygon, x) -> float:
    return float(sum(c.sign * c.value for c in distance_critical_points(poly, x)))


def bessel_index(scene: Scene, x) -> float:
    return float(sum(w * _polygon_bessel(p, x) for p, w in scene.items))


def bessel_index_many(scene: Scene, points) -> np.ndarray:
    return np.array([bessel_index(scene, p) for p in np.atleast_2d(points)])


def bessel_index_split(scene: Scene, x) -> tuple[float, float]:
    """The two boundary-side integrals ``(plus, minus)``; ``plus - minus`` is the transform.

    ``plus`` integrates the distance over the ``+`` side against the floor
    measure (co-index: max +1, min -1); ``minus`` integrates over the ``-``
    side against the ceiling measure (index: max -1, min +1).
    """
    plus = minus = 0.0
    for poly, w in scene.items:
        for c in distance_critical_points(poly, x):
            if c.side == "+":
                plus += w * c.sign * c.value
            else:
                minus -= w * c.sign * c.value
    return plus, minus


def fourier_index(scene: Scene, direction: Direction) -> float:
    total = 0.0
    for poly, w in scene.items:
        total += w * sum(c.sign * c.value for c in height_critical_points(poly, direction))
    return float(total)


def ball_bessel_closed_form(p, radius: float, x) -> float:
    """Bessel transform of a round disk: ``2 * min(|x - p|, radius)``."""
    if not radius > 0:
        raise ValueError("radius must be positive")
    return 2.0 * min(math.hypot(x[0] - p[0], x[1] - p[1]), radius)
