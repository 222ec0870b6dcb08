"""Localize two well-separated disks and an overlapping pair; plot both fields."""
from __future__ import annotations

import argparse
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from euler_transforms import GridSpec, Polygon, Scene, localize


def scenes():
    return {
        "separated": Scene.of(Polygon.regular((0.3, 0.35), 0.12), Polygon.regular((0.7, 0.6), 0.15)),
        "overlapping": Scene.of(Polygon.regular((0.45, 0.5), 0.2), Polygon.regular((0.55, 0.5), 0.2)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=96)
    ap.add_argument("--angles", type=int, default=720)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    grid = GridSpec(args.size, args.size, (0.0, 0.0), 1 / args.size)

    fig, axes = plt.subplots(1, 2, figsize=(10, 4.5))
    for ax, (name, scene) in zip(axes, scenes().items()):
        report, field = localize(scene, grid, m=args.angles)
        print(name, json.dumps(report.to_dict(), indent=1))
        im = ax.imshow(field.values, origin="lower", extent=(0, 1, 0, 1), cmap="viridis")
        for poly, _ in scene.items:
            v = poly.vertices
            ax.plot(*zip(*v, v[0]), color="w", lw=0.8)
        for mn in report.minima:
            ax.plot(*mn["position"], "r+", ms=12, mew=2)
        ax.set_title(f"{name}: {report.target_count} targets, {report.total_minima} minima")
        fig.colorbar(im, ax=ax, shrink=0.8)
    fig.savefig(args.out / "localization.png", dpi=120, bbox_inches="tight")
    print("wrote", args.out / "localization.png")


if __name__ == "__main__":
    main()
