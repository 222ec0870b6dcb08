"""Disk, hexagon and two squares: compare l2, l-infinity and SVA Bessel fields."""
from __future__ import annotations

import argparse
import json
import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from euler_transforms import GridSpec, NormProfile, Polygon, Scene, SvaFamily, discriminate


def four_targets() -> Scene:
    return Scene.of(
        Polygon.regular((0.25, 0.75), 0.12, 6),
        Polygon.rectangle((0.75, 0.75), 0.1, 0.1, math.radians(30)),
        Polygon.regular((0.25, 0.25), 0.12, 128),
        Polygon.rectangle((0.75, 0.25), 0.1, 0.1),
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=128)
    ap.add_argument("--rotations", type=int, default=8)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    grid = GridSpec(args.size, args.size, (0.0, 0.0), 1 / args.size)
    scene = four_targets()
    report, fields = discriminate(
        scene, [NormProfile.l2(), NormProfile.linf()], grid,
        sva=SvaFamily.rotated_linf(args.rotations), tol=grid.spacing,
    )
    for name, minima in report.per_norm.items():
        print(f"{name:>5}: deepest minima", [(tuple(round(c, 3) for c in m["position"]), round(m["depth"], 4)) for m in minima])
    (args.out / "discrimination.json").write_text(json.dumps(report.to_dict(), indent=1, sort_keys=True))

    fig, axes = plt.subplots(1, len(fields), figsize=(5 * len(fields), 4.5))
    for ax, (name, f) in zip(axes, fields.items()):
        im = ax.imshow(f.values, origin="lower", extent=(0, 1, 0, 1), cmap="viridis")
        for poly, _ in scene.items:
            v = poly.vertices
            ax.plot(*zip(*v, v[0]), color="w", lw=0.8)
        best = report.per_norm[name][0]["position"]
        ax.plot(*best, "r+", ms=12, mew=2)
        ax.set_title(name)
        fig.colorbar(im, ax=ax, shrink=0.8)
    fig.savefig(args.out / "discrimination.png", dpi=120, bbox_inches="tight")
    print("wrote", args.out / "discrimination.png")


if __name__ == "__main__":
    main()
