"""Target counting, localization and shape discrimination."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage
from skimage.morphology import h_minima

from .euler_core import GridFunction, GridSpec, euler_integral
from .geometry import Scene, rasterize
from .transforms import (
    DEFAULT_ANGLES,
    NormProfile,
    SvaFamily,
    TransformField,
    bessel_transform,
    bessel_transform_raster,
    sva_transform,
)

SCHEMA_VERSION = 1

GHOST_CAVEAT = (
    "More local minima than counted targets: overlapping sidelobes of nearby "
    "targets can create minima that are not target centers."
)
SHORTAGE_CAVEAT = (
    "Fewer local minima than counted targets: interference between targets "
    "hides some centers; localization is unreliable for this scene."
)

_EIGHT = np.ones((3, 3), dtype=bool)


def count_targets(h: GridFunction) -> int:
    if np.any(h.values < 0):
        raise ValueError("sensor counting functions are nonnegative")
    return euler_integral(h)


@dataclass(frozen=True)
class Minimum:
    position: tuple[float, float]
    depth: float
    cells: int = 1


def _regional_minima(v: np.ndarray) -> np.ndarray:
    """Mask of cells in connected equal-valued regions strictly below their outer ring."""
    padded = np.pad(v, 1, constant_values=np.inf)
    h, w = v.shape
    neigh_min = np.full(v.shape, np.inf)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy or dx:
                neigh_min = np.minimum(neigh_min, padded[1 + dy:1 + dy + h, 1 + dx:1 + dx + w])
    # adjacent candidates are equal, so candidate components are flat
    labels, _ = ndimage.label(v <= neigh_min, structure=_EIGHT)
    keep = np.zeros(v.shape, dtype=bool)
    for lab, sl in enumerate(ndimage.find_objects(labels), start=1):
        rows = slice(max(sl[0].start - 1, 0), sl[0].stop + 1)
        cols = slice(max(sl[1].start - 1, 0), sl[1].stop + 1)
        comp = labels[rows, cols] == lab
        ring = ndimage.binary_dilation(comp, structure=_EIGHT) & ~comp
        vals = v[rows, cols]
        if ring.any() and vals[ring].min() > vals[comp][0]:
            keep[rows, cols] |= comp
    return keep


def find_local_minima(field: TransformField, n: int | None = None, tol: float = 0.0) -> tuple[list[Minimum], bool]:
    """Local minima of a field over 8-neighbourhoods.

    With ``tol == 0`` every connected equal-valued region lying strictly below
    its whole outer ring is one minimum, reported at its centroid.  With
    ``tol > 0`` only basins at least ``tol`` deep count (h-minima), which
    suppresses quadrature noise; a basin is reported at the centroid of its
    lowest cells.  Returns the ``n`` deepest (all when ``n`` is None) and
    whether fewer than ``n`` exist.  Equal depths are ordered by position.
    """
    if n is not None and n < 0:
        raise ValueError("n must be nonnegative")
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    v = field.values
    mask = _regional_minima(v) if tol == 0 else h_minima(v, tol, footprint=_EIGHT).astype(bool)
    labels, _ = ndimage.label(mask, structure=_EIGHT)
    found = []
    for lab, sl in enumerate(ndimage.find_objects(labels), start=1):
        region = labels[sl] == lab
        vals = v[sl]
        depth = float(vals[region].min())
        rows, cols = np.nonzero(region & (vals == depth))
        pos = field.grid.center(float(rows.mean()) + sl[0].start, float(cols.mean()) + sl[1].start)
        found.append(Minimum((float(pos[0]), float(pos[1])), depth, int(region.sum())))
    found.sort(key=lambda mn: (mn.depth, mn.position))
    if n is None:
        return found, False
    return found[:n], len(found) < n


# --------------------------------------------------------------------------
# reports


@dataclass
class LocalizationReport:
    target_count: int
    minima: list[dict]
    total_minima: int
    shortage: bool
    mismatch: bool
    caveat: str | None
    parameters: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class DiscriminationReport:
    per_norm: dict[str, list[dict]]
    verdicts: list[dict]
    parameters: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return asdict(self)


def _minimum_dict(mn: Minimum, rank: int) -> dict:
    return {"position": list(mn.position), "depth": mn.depth, "rank": rank, "cells": mn.cells}


def localize(
    source: Scene | GridFunction,
    grid: GridSpec,
    norm: NormProfile | None = None,
    dr: float | None = None,
    m: int = DEFAULT_ANGLES,
    tol: float | None = None,
) -> tuple[LocalizationReport, TransformField]:
    """Count targets, transform, and report the deepest minima.

    For a scene, ``grid`` is used both to rasterize it (for the count) and
    as the output grid of the exact-scene transform.
    """
    norm = norm or NormProfile.l2()
    dr = grid.spacing / 2 if dr is None else dr
    tol = 2 * dr if tol is None else tol
    if isinstance(source, Scene):
        raster = rasterize(source, grid)
        field_ = bessel_transform(source, norm, grid, dr, m)
    else:
        raster = source
        field_ = bessel_transform_raster(source, norm, grid, dr, m)
    k = count_targets(raster)
    all_minima, _ = find_local_minima(field_, None, tol)
    chosen = all_minima[:k]
    shortage = len(all_minima) < k
    mismatch = len(all_minima) != k
    caveat = None
    if len(all_minima) > k:
        caveat = GHOST_CAVEAT
    elif shortage:
        caveat = SHORTAGE_CAVEAT
    report = LocalizationReport(
        target_count=k,
        minima=[_minimum_dict(mn, i) for i, mn in enumerate(chosen)],
        total_minima=len(all_minima),
        shortage=shortage,
        mismatch=mismatch,
        caveat=caveat,
        parameters={"norm": norm.name, "dr": dr, "m": m, "tol": tol, "grid": _grid_dict(grid)},
    )
    return report, field_


def _grid_dict(grid: GridSpec) -> dict:
    return {"width": grid.width, "height": grid.height, "origin": list(grid.origin), "spacing": grid.spacing}


def discriminate(
    scene: Scene,
    norms: Sequence[NormProfile],
    grid: GridSpec,
    dr: float | None = None,
    m: int = DEFAULT_ANGLES,
    sva: SvaFamily | None = None,
    n_minima: int = 4,
    tol: float | None = None,
) -> tuple[DiscriminationReport, dict[str, TransformField]]:
    """Run one transform per norm (plus SVA) and compare their deepest minima.

    A verdict is issued for every position that is among the reported minima
    of some transform: the transform whose field is lowest there wins.
    """
    dr = grid.spacing / 2 if dr is None else dr
    tol = 2 * dr if tol is None else tol
    fields: dict[str, TransformField] = {}
    for norm in norms:
        fields[norm.name] = bessel_transform(scene, norm, grid, dr, m)
    if sva is not None:
        members = [fields.get(n.name) or bessel_transform(scene, n, grid, dr, m) for n in sva.norms]
        fields["sva"] = sva_transform(scene, sva, grid, dr, m, members=members)

    per_norm = {}
    candidates: list[tuple[float, float]] = []
    for name, f in fields.items():
        minima, _ = find_local_minima(f, n_minima, tol)
        per_norm[name] = [_minimum_dict(mn, i) for i, mn in enumerate(minima)]
        candidates.extend(mn.position for mn in minima)

    verdicts = []
    for pos in sorted(set(candidates)):
        values = {name: f.value_at(*pos) for name, f in fields.items()}
        best = min(sorted(values), key=lambda name: values[name])
        verdicts.append({"position": list(pos), "best": best, "values": values})
    report = DiscriminationReport(
        per_norm=per_norm,
        verdicts=verdicts,
        parameters={
            "norms": [n.name for n in norms],
            "sva": [n.name for n in sva.norms] if sva else None,
            "dr": dr,
            "m": m,
            "tol": tol,
            "grid": _grid_dict(grid),
        },
    )
    return report, fields
