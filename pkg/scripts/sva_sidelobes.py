"""Off-target maxima of rotated l-infinity fields and their SVA minimum.

Sweeps the rotation of one square in a two-square scene and the dilation
used to mask out the targets, printing the SVA / worst-member ratio.
"""
from __future__ import annotations

import argparse
import math

import numpy as np
from scipy import ndimage

from euler_transforms import GridSpec, Polygon, Scene, SvaFamily, bessel_transform, rasterize, sva_transform


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=96)
    ap.add_argument("--rotations", type=int, default=8)
    ap.add_argument("--angles-deg", type=float, nargs="+", default=[10, 20, 30])
    ap.add_argument("--dilations", type=int, nargs="+", default=[2, 4, 8])
    args = ap.parse_args()
    grid = GridSpec(args.size, args.size, (0.0, 0.0), 1 / args.size)
    family = SvaFamily.rotated_linf(args.rotations)
    print("angle  dilation  sva_max  worst_member  ratio")
    for deg in args.angles_deg:
        scene = Scene.of(
            Polygon.rectangle((0.32, 0.5), 0.12, 0.12, math.radians(deg)),
            Polygon.rectangle((0.7, 0.5), 0.1, 0.1),
        )
        members = [bessel_transform(scene, n, grid) for n in family.norms]
        sva = sva_transform(scene, family, grid, members=members)
        support = rasterize(scene, grid).values > 0
        for it in args.dilations:
            off = ~ndimage.binary_dilation(support, np.ones((3, 3), bool), iterations=it)
            worst = max(float(f.values[off].max()) for f in members)
            top = float(sva.values[off].max())
            print(f"{deg:5.1f}  {it:8d}  {top:7.4f}  {worst:12.4f}  {top / worst:5.3f}")


if __name__ == "__main__":
    main()
