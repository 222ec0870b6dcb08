"""Numeric Euler-Bessel, Euler-Fourier and SVA transforms.

The Bessel transform at x is evaluated as a midpoint sum over radii
``r_j = (j + 1/2) * dr`` of the Euler integral of the integrand sampled at
``m`` points of the radius-``r_j`` norm sphere about x.  ``bessel_value_sampled``
does exactly that, sample by sample; ``bessel_transform`` produces the same
numbers through the event sweep in ``_kernels``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .euler_core import (
    CircularProfile,
    GridFunction,
    GridSpec,
    IntervalProfile,
    contour_euler_integral,
    segment_euler_integral,
)
from .geometry import Direction, Scene, scene_eval

DEFAULT_ANGLES = 720


@dataclass(frozen=True)
class NormProfile:
    """A planar norm given by the radial function of its unit sphere.

    ``kind`` is one of ``"l2"``, ``"l1"``, ``"linf"`` or ``"sampled"``; a
    sampled norm interpolates ``samples`` (periodic, equally spaced angles).
    """

    name: str
    kind: str = "l2"
    rotation: float = 0.0
    samples: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in ("l2", "l1", "linf", "sampled"):
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "sampled":
            s = np.asarray(self.samples, dtype=float)
            if s.ndim != 1 or s.size < 3 or not np.all(np.isfinite(s)) or np.any(s <= 0):
                raise ValueError("sampled norm needs >= 3 positive finite radii")
            object.__setattr__(self, "samples", s)

    @classmethod
    def l2(cls) -> "NormProfile":
        return cls("l2", "l2")

    @classmethod
    def l1(cls) -> "NormProfile":
        return cls("l1", "l1")

    @classmethod
    def linf(cls, rotation: float = 0.0) -> "NormProfile":
        if rotation == 0.0:
            return cls("linf", "linf")
        return cls(f"linf-rot:{math.degrees(rotation):g}", "linf", rotation)

    def rho(self, theta) -> np.ndarray:
        t = np.asarray(theta, dtype=float) - self.rotation
        if self.kind == "l2":
            return np.ones_like(t)
        if self.kind == "linf":
            return 1.0 / np.maximum(np.abs(np.cos(t)), np.abs(np.sin(t)))
        if self.kind == "l1":
            return 1.0 / (np.abs(np.cos(t)) + np.abs(np.sin(t)))
        n = self.samples.size
        grid = np.arange(n + 1) * (2 * np.pi / n)
        return np.interp(np.mod(t, 2 * np.pi), grid, np.append(self.samples, self.samples[0]))

    def norm(self, v) -> np.ndarray:
        """The norm of vector(s) ``v`` (last axis of length 2)."""
        v = np.asarray(v, dtype=float)
        r = np.hypot(v[..., 0], v[..., 1])
        return r / self.rho(np.arctan2(v[..., 1], v[..., 0]))


def parse_norm(spec: str) -> NormProfile:
    """Parse ``l2``, ``l1``, ``linf`` or ``linf-rot:<degrees>``."""
    if spec in ("l2", "l1", "linf"):
        return NormProfile(spec, spec)
    if spec.startswith("linf-rot:"):
        try:
            deg = float(spec.split(":", 1)[1])
        except ValueError:
            raise ValueError(f"bad rotation in norm {spec!r}") from None
        return NormProfile(f"linf-rot:{deg:g}", "linf", math.radians(deg))
    raise ValueError(f"unknown norm {spec!r}")


@dataclass(frozen=True)
class SvaFamily:
    norms: tuple[NormProfile, ...]

    def __post_init__(self):
        object.__setattr__(self, "norms", tuple(self.norms))
        if not self.norms:
            raise ValueError("SVA family must be nonempty")

    @classmethod
    def rotated_linf(cls, k: int) -> "SvaFamily":
        """``k`` rotations of the l-infinity norm, equally spaced over [0, pi/2)."""
        if k < 1:
            raise ValueError("need at least one rotation")
        return cls(tuple(NormProfile.linf(0.5 * np.pi * i / k) for i in range(k)))


@dataclass(frozen=True)
class TransformField:
    grid: GridSpec
    values: np.ndarray
    norm: str
    dr: float
    m: int
    r_max: float

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise ValueError("field shape does not match grid")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def value_at(self, x, y) -> float:
        row, col = self.grid.cell_of(x, y)
        return float(self.values[row, col])


# --------------------------------------------------------------------------
# contour sampling


def _angles(m: int) -> np.ndarray:
    return 2 * np.pi * np.arange(m) / m


def contour_points(norm: NormProfile, x, r: float, m: int) -> tuple[np.ndarray, np.ndarray]:
    theta = _angles(m)
    rr = r * norm.rho(theta)
    return x[0] + rr * np.cos(theta), x[1] + rr * np.sin(theta)


def contour_sample(scene: Scene, norm: NormProfile, x, r: float, m: int = DEFAULT_ANGLES) -> CircularProfile:
    if not r > 0:
        raise ValueError("contour radius must be positive")
    if m < 3:
        raise ValueError("need at least 3 contour samples")
    px, py = contour_points(norm, x, r, m)
    return CircularProfile(scene_eval(scene, px, py), _angles(m))


def raster_lookup(h: GridFunction, px, py) -> np.ndarray:
    """Value of the cell containing each point; zero outside the grid."""
    g = h.grid
    col = np.floor((np.asarray(px) - g.origin[0]) / g.spacing).astype(np.int64)
    row = np.floor((np.asarray(py) - g.origin[1]) / g.spacing).astype(np.int64)
    ok = (col >= 0) & (col < g.width) & (row >= 0) & (row < g.height)
    out = np.zeros(np.shape(col), dtype=np.int64)
    out[ok] = h.values[row[ok], col[ok]]
    return out


def contour_sample_raster(h: GridFunction, norm: NormProfile, x, r: float, m: int = DEFAULT_ANGLES) -> CircularProfile:
    px, py = contour_points(norm, x, r, m)
    return CircularProfile(raster_lookup(h, px, py), _angles(m))


def bessel_value_sampled(scene: Scene | GridFunction, norm: NormProfile, x, dr: float, m: int, n_r: int) -> float:
    """Direct midpoint sum of sampled contour integrals (slow reference path)."""
    x = np.asarray(x, dtype=float)
    total = 0
    for j in range(n_r):
        r = (j + 0.5) * dr
        if isinstance(scene, GridFunction):
            p = contour_sample_raster(scene, norm, x, r, m)
        else:
            p = contour_sample(scene, norm, x, r, m)
        total += contour_euler_integral(p)
    return total * dr


# --------------------------------------------------------------------------
# Bessel


def _support_radius(points_x, points_y, sx, sy, ex, ey) -> float:
    if sx.size == 0:
        return 0.0
    vx = np.concatenate([sx, ex])
    vy = np.concatenate([sy, ey])
    lo_x, hi_x = min(vx.min(), points_x.min()), max(vx.max(), points_x.max())
    lo_y, hi_y = min(vy.min(), points_y.min()), max(vy.max(), points_y.max())
    return float(math.hypot(hi_x - lo_x, hi_y - lo_y))


def _bessel_counts(px, py, segments, norm: NormProfile, dr: float, m: int, n_r: int) -> np.ndarray:
    sx, sy, ex, ey, w = segments
    theta = _angles(m)
    rho = np.ascontiguousarray(norm.rho(theta), dtype=float)
    if sx.size == 0:
        return np.zeros(px.size, dtype=np.int64)
    return _kernels.sweep_points(
        px, py, rho, np.cos(theta), np.sin(theta), sx, sy, ex, ey, w, float(dr), int(n_r)
    )


def _scene_segments(scene: Scene):
    a, b, w = scene.segments()
    return (
        np.ascontiguousarray(a[:, 0]), np.ascontiguousarray(a[:, 1]),
        np.ascontiguousarray(b[:, 0]), np.ascontiguousarray(b[:, 1]),
        np.ascontiguousarray(w, dtype=np.int64),
    )


def raster_segments(h: GridFunction):
    """Cell boundaries of a raster as weighted oriented segments.

    Crossing a segment from its right to its left side changes the raster
    value by the segment weight, so rasters and scenes share one kernel.
    """
    g = h.grid
    v = np.pad(h.values, 1)  # v[r+1, c+1] is cell (r, c)
    s = g.spacing
    x0, y0 = g.origin
    sx, sy, ex, ey, w = [], [], [], [], []
    # vertical lines x = x0 + c*s, oriented +y; left side is column c-1
    jump = v[1:-1, :-1] - v[1:-1, 1:]
    rows, cols = np.nonzero(jump)
    sx.append(x0 + cols * s)
    sy.append(y0 + rows * s)
    ex.append(x0 + cols * s)
    ey.append(y0 + (rows + 1) * s)
    w.append(jump[rows, cols])
    # horizontal lines y = y0 + r*s, oriented -x; left side is row r-1
    jump = v[:-1, 1:-1] - v[1:, 1:-1]
    rows, cols = np.nonzero(jump)
    sx.append(x0 + (cols + 1) * s)
    sy.append(y0 + rows * s)
    ex.append(x0 + cols * s)
    ey.append(y0 + rows * s)
    w.append(jump[rows, cols])
    cat = [np.ascontiguousarray(np.concatenate(a), dtype=float) for a in (sx, sy, ex, ey)]
    return (*cat, np.ascontiguousarray(np.concatenate(w), dtype=np.int64))


def _check_params(dr: float, m: int):
    if not dr > 0:
        raise ValueError("dr must be positive")
    if m < 3:
        raise ValueError("need at least 3 angular samples")


def _n_radii(px, py, segments, norm: NormProfile, dr: float, m: int, r_max: float | None) -> tuple[int, float]:
    if r_max is None:
        rho_min = float(norm.rho(_angles(m)).min())
        r_max = _support_radius(px, py, *segments[:4]) / rho_min + dr
    return int(math.ceil(r_max / dr)), float(r_max)


def bessel_transform(
    scene: Scene,
    norm: NormProfile,
    grid: GridSpec,
    dr: float | None = None,
    m: int = DEFAULT_ANGLES,
    r_max: float | None = None,
) -> TransformField:
    """Numeric Bessel transform of a scene at every cell center of ``grid``.

    ``dr`` defaults to half the grid spacing; ``r_max`` defaults to a radius
    past which no contour meets the support.
    """
    dr = grid.spacing / 2 if dr is None else float(dr)
    _check_params(dr, m)
    xs, ys = grid.centers()
    px, py = xs.ravel(), ys.ravel()
    segments = _scene_segments(scene)
    n_r, r_max = _n_radii(px, py, segments, norm, dr, m, r_max)
    counts = _bessel_counts(px, py, segments, norm, dr, m, n_r)
    return TransformField(grid, (counts * dr).reshape(grid.shape), norm.name, dr, m, r_max)


def bessel_at(scene: Scene, norm: NormProfile, points, dr: float, m: int = DEFAULT_ANGLES, r_max: float | None = None) -> np.ndarray:
    """Numeric Bessel transform at arbitrary points (``(n, 2)`` array)."""
    _check_params(dr, m)
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    px, py = np.ascontiguousarray(pts[:, 0]), np.ascontiguousarray(pts[:, 1])
    segments = _scene_segments(scene)
    n_r, _ = _n_radii(px, py, segments, norm, dr, m, r_max)
    counts = _bessel_counts(px, py, segments, norm, dr, m, n_r)
    return counts * dr


def bessel_transform_raster(
    h: GridFunction,
    norm: NormProfile,
    grid: GridSpec,
    dr: float | None = None,
    m: int = DEFAULT_ANGLES,
    r_max: float | None = None,
) -> TransformField:
    """Bessel transform of a raster; contour samples read the containing cell."""
    dr = grid.spacing / 2 if dr is None else float(dr)
    _check_params(dr, m)
    xs, ys = grid.centers()
    px, py = xs.ravel(), ys.ravel()
    segments = raster_segments(h)
    n_r, r_max = _n_radii(px, py, segments, norm, dr, m, r_max)
    counts = _bessel_counts(px, py, segments, norm, dr, m, n_r)
    return TransformField(grid, (counts * dr).reshape(grid.shape), norm.name, dr, m, r_max)


def sva_transform(
    scene: Scene,
    family: SvaFamily,
    grid: GridSpec,
    dr: float | None = None,
    m: int = DEFAULT_ANGLES,
    members: Sequence[TransformField] | None = None,
) -> TransformField:
    """Pointwise minimum of the Bessel fields over a family of norms."""
    if members is None:
        members = [bessel_transform(scene, norm, grid, dr, m) for norm in family.norms]
    values = np.minimum.reduce([f.values for f in members])
    first = members[0]
    name = "sva[" + ",".join(n.name for n in family.norms) + "]"
    return TransformField(grid, values, name, first.dr, first.m, max(f.r_max for f in members))


# --------------------------------------------------------------------------
# Fourier


def _line_profile(a, b, w, xi, perp, level) -> IntervalProfile:
    """Integrand along the line ``xi . p = level``, one sample per constant piece."""
    ha, hb = a @ xi, b @ xi
    cross = (ha >= level) != (hb >= level)
    if not cross.any():
        return IntervalProfile(np.zeros(0, dtype=np.int64), np.zeros(0))
    a, b, w, ha, hb = a[cross], b[cross], w[cross], ha[cross], hb[cross]
    t = (level - ha) / (hb - ha)
    pts = a + t[:, None] * (b - a)
    pos = pts @ perp
    e = b - a
    # walking along +perp, entering the left side of an edge adds its weight
    enter = e[:, 0] * perp[1] - e[:, 1] * perp[0] > 0
    delta = np.where(enter, w, -w)
    order = np.argsort(pos, kind="mergesort")
    pos, delta = pos[order], delta[order]
    breaks, idx = np.unique(pos, return_index=True)
    steps = np.add.reduceat(delta, idx)
    values = np.cumsum(steps)[:-1]
    mids = 0.5 * (breaks[:-1] + breaks[1:])
    return IntervalProfile(values, mids)


def fourier_transform(scene: Scene, direction: Direction, dr: float) -> float:
    """Numeric Fourier transform in a unit direction.

    The support is translated so its projection starts at 0; the offset is
    not counted, making the result translation invariant.
    """
    if not dr > 0:
        raise ValueError("dr must be positive")
    if not scene.items:
        return 0.0
    a, b, w = scene.segments()
    xi = direction.covector
    perp = np.array([-xi[1], xi[0]])
    proj = a @ xi
    lo, hi = float(proj.min()), float(proj.max())
    n = int(math.ceil((hi - lo) / dr))
    total = 0
    for j in range(n):
        total += segment_euler_integral(_line_profile(a, b, w, xi, perp, lo + (j + 0.5) * dr))
    return total * dr


def fourier_profile(scene: Scene, n_directions: int, dr: float) -> list[tuple[Direction, float]]:
    out = []
    for i in range(n_directions):
        d = Direction(2 * np.pi * i / n_directions)
        out.append((d, fourier_transform(scene, d, dr)))
    return out
