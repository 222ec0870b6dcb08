"""Numeric-vs-index Bessel error for random star polygons as m and dr vary.

Reports the worst error relative to the tolerance 3*dr + 2*perimeter/m, and
the error near an acute apex, where thin arcs fall between angular samples.
"""
from __future__ import annotations

import argparse

import numpy as np

from euler_transforms import NormProfile, Polygon, Scene, bessel_index
from euler_transforms.geometry import random_star_polygon
from euler_transforms.transforms import bessel_at


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--polygons", type=int, default=10)
    ap.add_argument("--points", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--r-min", type=float, nargs="+", default=[0.3, 0.5])
    args = ap.parse_args()
    l2 = NormProfile.l2()
    print("r_min     dr     m   worst err/tol")
    for r_min in args.r_min:
        for dr, m in ((0.01, 360), (0.005, 720), (0.0025, 1440)):
            rng = np.random.default_rng(args.seed)
            worst = 0.0
            for _ in range(args.polygons):
                poly = random_star_polygon(rng, int(rng.integers(5, 13)), r_min=r_min)
                pts = rng.uniform(-1.3, 1.3, (args.points, 2))
                num = bessel_at(Scene.of(poly), l2, pts, dr, m)
                ex = np.array([bessel_index(Scene.of(poly), p) for p in pts])
                worst = max(worst, float((np.abs(num - ex) / (3 * dr + 2 * poly.perimeter / m)).max()))
            print(f"{r_min:5.2f}  {dr:6.4f}  {m:4d}  {worst:8.3f}")

    tri = Scene.of(Polygon([(0, 0), (1, 0), (0.5, 0.08)]))
    print("\nacute apex, point (2, 1): index", round(bessel_index(tri, (2.0, 1.0)), 4))
    for m in (90, 360, 1440, 5760):
        print(f"  m={m:5d}  numeric {bessel_at(tri, l2, [(2.0, 1.0)], 0.001, m)[0]:.4f}")


if __name__ == "__main__":
    main()
