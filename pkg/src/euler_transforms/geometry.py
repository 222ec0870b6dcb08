"""Polygonal scenes, rasterization and boundary critical points."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .euler_core import GridFunction, GridSpec

# relative tolerance for treating an edge as perpendicular to a direction
_PLATEAU_TOL = 1e-12


def signed_area(vertices: np.ndarray) -> float:
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _segments_cross(p1, p2, q1, q2) -> bool:
    d1, d2 = _orient(q1, q2, p1), _orient(q1, q2, p2)
    d3, d4 = _orient(p1, p2, q1), _orient(p1, p2, q2)
    if d1 == d2 == d3 == d4 == 0:
        # collinear: overlap test on bounding boxes
        return bool(
            min(p1[0], p2[0]) <= max(q1[0], q2[0]) and min(q1[0], q2[0]) <= max(p1[0], p2[0])
            and min(p1[1], p2[1]) <= max(q1[1], q2[1]) and min(q1[1], q2[1]) <= max(p1[1], p2[1])
        )
    return d1 * d2 <= 0 and d3 * d4 <= 0


def is_simple(vertices: np.ndarray) -> bool:
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        for j in range(i + 1, n):
            if (j + 1) % n == i or j == (i + 1) % n:
                continue
            c, d = vertices[j], vertices[(j + 1) % n]
            if _segments_cross(a, b, c, d):
                return False
    return True


@dataclass(frozen=True)
class Polygon:
    """Simple polygon with counter-clockwise vertices (closing edge implied)."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValueError("vertices must be an (n, 2) array")
        if len(v) > 3 and np.allclose(v[0], v[-1]):
            v = v[:-1]
        if len(v) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        area = signed_area(v)
        if area == 0:
            raise ValueError("polygon has zero area")
        if area < 0:
            raise ValueError("polygon vertices must be counter-clockwise")
        if not is_simple(v):
            raise ValueError("polygon is self-intersecting")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def ccw(cls, vertices) -> "Polygon":
        """Build from vertices in either orientation."""
        v = np.asarray(vertices, dtype=float)
        if signed_area(v) < 0:
            v = v[::-1]
        return cls(v)

    @classmethod
    def regular(cls, center, radius: float, n: int = 128, phase: float = 0.0) -> "Polygon":
        """Regular n-gon inscribed in the circle of given radius."""
        t = phase + 2 * np.pi * np.arange(n) / n
        return cls(np.column_stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)]))

    @classmethod
    def rectangle(cls, center, half_w: float, half_h: float, angle: float = 0.0) -> "Polygon":
        c, s = math.cos(angle), math.sin(angle)
        local = np.array([[-half_w, -half_h], [half_w, -half_h], [half_w, half_h], [-half_w, half_h]])
        rot = local @ np.array([[c, s], [-s, c]])
        return cls(rot + np.asarray(center, dtype=float))

    @property
    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices, np.roll(self.vertices, -1, axis=0)

    @property
    def perimeter(self) -> float:
        a, b = self.edges
        return float(np.hypot(*(b - a).T).sum())

    @property
    def area(self) -> float:
        return signed_area(self.vertices)

    def bbox(self) -> tuple[float, float, float, float]:
        lo, hi = self.vertices.min(axis=0), self.vertices.max(axis=0)
        return (lo[0], lo[1], hi[0], hi[1])

    def translated(self, v) -> "Polygon":
        return Polygon(self.vertices + np.asarray(v, dtype=float))

    def rotated(self, angle: float, about=(0.0, 0.0)) -> "Polygon":
        c, s = math.cos(angle), math.sin(angle)
        about = np.asarray(about, dtype=float)
        return Polygon((self.vertices - about) @ np.array([[c, s], [-s, c]]) + about)

    def scaled(self, k: float) -> "Polygon":
        return Polygon(self.vertices * k)


@dataclass(frozen=True)
class Scene:
    """Weighted polygons; the induced function is the weighted sum of closed indicators."""

    items: tuple[tuple[Polygon, int], ...] = ()

    def __post_init__(self):
        items = tuple((p, int(w)) for p, w in self.items)
        for p, w in items:
            if not isinstance(p, Polygon):
                raise TypeError("scene items must be (Polygon, weight) pairs")
            if w < 1:
                raise ValueError(f"weights must be positive integers, got {w}")
        object.__setattr__(self, "items", items)

    @classmethod
    def of(cls, *polygons: Polygon, weight: int = 1) -> "Scene":
        return cls(tuple((p, weight) for p in polygons))

    def __len__(self) -> int:
        return len(self.items)

    def bbox(self) -> tuple[float, float, float, float] | None:
        if not self.items:
            return None
        boxes = np.array([p.bbox() for p, _ in self.items])
        return (boxes[:, 0].min(), boxes[:, 1].min(), boxes[:, 2].max(), boxes[:, 3].max())

    def translated(self, v) -> "Scene":
        return Scene(tuple((p.translated(v), w) for p, w in self.items))

    def rotated(self, angle: float, about=(0.0, 0.0)) -> "Scene":
        return Scene(tuple((p.rotated(angle, about), w) for p, w in self.items))

    def scaled(self, k: float) -> "Scene":
        return Scene(tuple((p.scaled(k), w) for p, w in self.items))

    def segments(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All edges as ``(starts, ends, weights)``; entering across an edge from
        its right side to its left side raises the function by its weight."""
        if not self.items:
            return np.zeros((0, 2)), np.zeros((0, 2)), np.zeros(0, dtype=np.int64)
        starts, ends, weights = [], [], []
        for poly, w in self.items:
            a, b = poly.edges
            starts.append(a)
            ends.append(b)
            weights.append(np.full(len(a), w, dtype=np.int64))
        return np.concatenate(starts), np.concatenate(ends), np.concatenate(weights)


# --------------------------------------------------------------------------
# evaluation


def _winding_closed(poly: Polygon, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    """Boundary-inclusive membership of points in a simple polygon."""
    a, b = poly.edges
    inside = np.zeros(px.shape, dtype=np.int64)
    on_edge = np.zeros(px.shape, dtype=bool)
    for (x0, y0), (x1, y1) in zip(a, b):
        cross = (x1 - x0) * (py - y0) - (px - x0) * (y1 - y0)
        up = (y0 <= py) & (y1 > py) & (cross > 0)
        down = (y0 > py) & (y1 <= py) & (cross < 0)
        inside += up.astype(np.int64) - down.astype(np.int64)
        within = (
            (cross == 0)
            & (np.minimum(x0, x1) <= px) & (px <= np.maximum(x0, x1))
            & (np.minimum(y0, y1) <= py) & (py <= np.maximum(y0, y1))
        )
        on_edge |= within
    return (inside != 0) | on_edge


def scene_eval(scene: Scene, x, y=None):
    """Weighted count of closed polygons containing the point(s).

    Accepts a single point ``(x, y)`` or coordinate arrays ``x, y``.
    """
    if y is None:
        x, y = x
    px, py = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    total = np.zeros(px.shape, dtype=np.int64)
    for poly, w in scene.items:
        total += w * _winding_closed(poly, px, py)
    if total.ndim == 0:
        return int(total)
    return total


def rasterize(scene: Scene, grid: GridSpec) -> GridFunction:
    """Sample the scene at cell centers; the support must leave a zero ring."""
    if scene.items:
        x0, y0, x1, y1 = scene.bbox()
        gx0, gy0, gx1, gy1 = grid.extent
        s = grid.spacing
        if x0 < gx0 + s or y0 < gy0 + s or x1 > gx1 - s or y1 > gy1 - s:
            raise ValueError("grid too small: scene support must sit inside a one-cell zero margin")
    xs, ys = grid.centers()
    return GridFunction(grid, scene_eval(scene, xs, ys))


# --------------------------------------------------------------------------
# critical points


@dataclass(frozen=True)
class Direction:
    angle: float

    @property
    def covector(self) -> np.ndarray:
        return np.array([math.cos(self.angle), math.sin(self.angle)])


@dataclass(frozen=True)
class CriticalPoint:
    position: tuple[float, float]
    value: float
    kind: str  # "min", "max" or "plateau" (non-extremal)
    side: str  # "+" or "-"

    @property
    def morse_index(self) -> int | None:
        return {"min": 0, "max": 1}.get(self.kind)

    @property
    def sign(self) -> int:
        return {"min": -1, "max": 1}.get(self.kind, 0)


def _outward_normals(poly: Polygon) -> np.ndarray:
    a, b = poly.edges
    e = b - a
    n = np.column_stack([e[:, 1], -e[:, 0]])
    return n / np.hypot(n[:, 0], n[:, 1])[:, None]


def _in_open_cone(v: np.ndarray, n1: np.ndarray, n2: np.ndarray) -> bool:
    """Whether v = a*n1 + b*n2 with a, b > 0 (n1, n2 not antiparallel)."""
    det = n1[0] * n2[1] - n1[1] * n2[0]
    if det == 0:
        return bool(np.dot(v, n1) > 0 and abs(n1[0] * v[1] - n1[1] * v[0]) == 0)
    a = (v[0] * n2[1] - v[1] * n2[0]) / det
    b = (n1[0] * v[1] - n1[1] * v[0]) / det
    return bool(a > 0 and b > 0)


def distance_critical_points(poly: Polygon, x) -> list[CriticalPoint]:
    """Critical points of the distance to ``x`` restricted to the boundary loop.

    Maxima only occur at vertices; minima at interior perpendicular feet or
    at vertices.  A boundary point is on the ``-`` side when ``x`` lies in
    its open outward halfspace; at a vertex the halfspace is replaced by the
    open cone spanned by the two adjacent outward normals.
    """
    x = np.asarray(x, dtype=float)
    v = poly.vertices
    n = len(v)
    normals = _outward_normals(poly)
    out: list[CriticalPoint] = []
    for i in range(n):
        prev_v, cur, nxt = v[i - 1], v[i], v[(i + 1) % n]
        rel = cur - x
        slope_in = float(np.dot(rel, cur - prev_v))
        slope_out = float(np.dot(rel, nxt - cur))
        if slope_in > 0 and slope_out < 0:
            kind = "max"
        elif slope_in <= 0 and slope_out >= 0:
            kind = "min"
        else:
            kind = None
        if kind is not None:
            side = "-" if _in_open_cone(x - cur, normals[i - 1], normals[i]) else "+"
            out.append(CriticalPoint((float(cur[0]), float(cur[1])), float(np.hypot(*rel)), kind, side))
        # perpendicular foot in the open edge
        e = nxt - cur
        t = float(np.dot(x - cur, e) / np.dot(e, e))
        if 0 < t < 1:
            foot = cur + t * e
            off = float(np.dot(x - foot, normals[i]))
            out.append(
                CriticalPoint(
                    (float(foot[0]), float(foot[1])),
                    float(np.hypot(*(x - foot))),
                    "min",
                    "-" if off > 0 else "+",
                )
            )
    return out


def height_critical_points(poly: Polygon, direction: Direction) -> list[CriticalPoint]:
    """Critical points of the linear height along ``direction`` on the boundary loop.

    Edges perpendicular to the direction collapse into one plateau critical
    point located at the middle of the flat run.
    """
    xi = direction.covector
    v = poly.vertices
    n = len(v)
    heights = v @ xi
    edge_vec = np.roll(v, -1, axis=0) - v
    scale = float(np.abs(v).max()) or 1.0
    slope = edge_vec @ xi
    sgn = np.where(np.abs(slope) <= _PLATEAU_TOL * scale, 0, np.sign(slope)).astype(int)
    if not np.any(sgn):
        return []
    normals = _outward_normals(poly)
    # start at an edge with nonzero slope so flat runs never wrap the origin
    start = int(np.flatnonzero(sgn)[0])
    out: list[CriticalPoint] = []
    k = 1
    while k <= n:
        i = (start + k) % n  # vertex i sits between edge i-1 and edge i
        prev_sign = sgn[(i - 1) % n]
        run = []
        j = i
        while sgn[j % n] == 0:
            run.append(j % n)
            j += 1
        next_sign = sgn[j % n]
        if prev_sign > 0 and next_sign < 0:
            kind = "max"
        elif prev_sign < 0 and next_sign > 0:
            kind = "min"
        else:
            kind = None
        if run:
            pts = np.vstack([v[i], v[j % n]])
            pos = pts.mean(axis=0)
            value = float(np.mean(heights[[i] + [(r + 1) % n for r in run]]))
            side = "+" if float(np.dot(normals[run[0]], xi)) > 0 else "-"
            out.append(CriticalPoint((float(pos[0]), float(pos[1])), value, kind or "plateau", side))
            k += len(run) + 1
            continue
        if kind is not None:
            side = "+" if _in_open_cone(xi, normals[(i - 1) % n], normals[i]) else "-"
            out.append(CriticalPoint((float(v[i][0]), float(v[i][1])), float(heights[i]), kind, side))
        k += 1
    return out


# --------------------------------------------------------------------------
# synthetic scenes


def random_star_polygon(rng: np.random.Generator, n_vertices: int, center=(0.0, 0.0), r_min=0.5, r_max=1.0) -> Polygon:
    """Random simple polygon, star-shaped about ``center``."""
    while True:
        gaps = rng.uniform(0.3, 1.0, n_vertices)
        angles = np.cumsum(gaps) / gaps.sum() * 2 * np.pi + rng.uniform(0, 2 * np.pi)
        radii = rng.uniform(r_min, r_max, n_vertices)
        pts = np.column_stack([center[0] + radii * np.cos(angles), center[1] + radii * np.sin(angles)])
        try:
            return Polygon.ccw(pts)
        except ValueError:
            continue


def random_disjoint_convex_scene(
    rng: np.random.Generator, k: int, box=(0.0, 0.0, 1.0, 1.0), radius=(0.04, 0.1), max_tries: int = 10_000
) -> Scene:
    """``k`` random convex polygons whose circumscribed disks are pairwise separated."""
    x0, y0, x1, y1 = box
    placed: list[tuple[np.ndarray, float]] = []
    polys = []
    for _ in range(max_tries):
        if len(polys) == k:
            break
        r = rng.uniform(*radius)
        c = rng.uniform([x0 + r, y0 + r], [x1 - r, y1 - r])
        if any(np.hypot(*(c - pc)) < r + pr + 0.05 for pc, pr in placed):
            continue
        nv = int(rng.integers(3, 9))
        phase = rng.uniform(0, 2 * np.pi)
        polys.append(Polygon.regular(c, r, nv, phase))
        placed.append((c, r))
    if len(polys) < k:
        raise RuntimeError(f"could not place {k} disjoint targets")
    return Scene.of(*polys)
