"""Command-line entry point: ``euler-tx <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 input error, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io
from .euler_core import GridSpec, euler_integral
from .geometry import Direction, random_disjoint_convex_scene, rasterize
from .index import bessel_index
from .pipeline import discriminate, localize
from .transforms import (
    DEFAULT_ANGLES,
    SvaFamily,
    bessel_transform,
    bessel_transform_raster,
    fourier_transform,
    parse_norm,
    sva_transform,
)

EXIT_USAGE, EXIT_INPUT, EXIT_INVARIANT = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(kind):
    def conv(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v
    return conv


def _add_grid(p, required=True):
    p.add_argument("--grid", nargs=2, type=_positive(int), metavar=("W", "H"), required=required)
    p.add_argument("--spacing", type=_positive(float), default=None)
    p.add_argument("--origin", nargs=2, type=float, metavar=("X", "Y"), default=(0.0, 0.0))


def _add_transform(p):
    p.add_argument("--dr", type=_positive(float), default=None, help="radial step (default spacing/2)")
    p.add_argument("--angles", type=int, default=DEFAULT_ANGLES, help="contour samples per radius")
    p.add_argument("--norm", default="l2", help="l2, l1, linf or linf-rot:<deg>")


def _add_output(p, formats=("csv", "pgm", "json"), default="csv"):
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=formats, default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="euler-tx", description="Euler-Bessel / Euler-Fourier transforms of planar scenes")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="rasterize a scene JSON (or a random scene) to a raster file")
    p.add_argument("scene", nargs="?")
    p.add_argument("--random", type=int, default=None, metavar="K", help="generate K disjoint convex targets")
    p.add_argument("--seed", type=int, default=0)
    _add_grid(p)
    p.add_argument("--out", default=None)
    p.add_argument("--scene-out", default=None, help="also write the generated scene JSON")

    p = sub.add_parser("integrate", help="Euler integral of a raster file")
    p.add_argument("raster")

    for name, help_ in (("bessel", "numeric Bessel transform field"), ("sva", "SVA over rotated l-infinity norms")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("scene", nargs="?")
        p.add_argument("--raster", default=None, help="use a raster file instead of a scene")
        _add_grid(p, required=False)
        _add_transform(p)
        _add_output(p)
        p.add_argument("--image", default=None, help="also write a PNG heatmap")
        if name == "sva":
            p.add_argument("--sva-rotations", type=_positive(int), default=8)

    p = sub.add_parser("fourier", help="numeric and index Fourier transform over directions")
    p.add_argument("scene")
    p.add_argument("--directions", type=_positive(int), default=8)
    p.add_argument("--dr", type=_positive(float), default=0.01)
    _add_output(p, ("csv", "json"))

    p = sub.add_parser("index", help="closed-form Bessel transform at points")
    p.add_argument("scene")
    p.add_argument("--points", nargs="+", required=True, metavar="X,Y")
    p.add_argument("--norm", default="l2")
    _add_output(p, ("csv", "json"))

    p = sub.add_parser("localize", help="count targets and report the deepest Bessel minima")
    p.add_argument("scene", nargs="?")
    p.add_argument("--raster", default=None)
    _add_grid(p, required=False)
    _add_transform(p)
    p.add_argument("--tol", type=float, default=None, help="minimum basin depth (default 2*dr)")
    p.add_argument("--out", default=None)

    p = sub.add_parser("discriminate", help="compare Bessel minima across norms")
    p.add_argument("scene")
    _add_grid(p)
    p.add_argument("--dr", type=_positive(float), default=None)
    p.add_argument("--angles", type=int, default=DEFAULT_ANGLES)
    p.add_argument("--norm", action="append", default=None, help="repeatable; default l2 and linf")
    p.add_argument("--sva-rotations", type=int, default=8, help="0 disables the SVA transform")
    p.add_argument("--minima", type=int, default=4)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default=None)
    return parser


# --------------------------------------------------------------------------


def _grid(args, fallback: GridSpec | None = None) -> GridSpec:
    if args.grid is None:
        if fallback is None:
            raise UsageError("--grid is required")
        return fallback
    if args.spacing is None:
        raise UsageError("--spacing is required with --grid")
    return GridSpec(args.grid[0], args.grid[1], tuple(args.origin), args.spacing)


def _norm(spec):
    try:
        return parse_norm(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _source(args):
    if (args.scene is None) == (args.raster is None):
        raise UsageError("give exactly one of a scene file or --raster")
    if args.raster:
        return io.load_raster(args.raster)
    return io.load_scene(args.scene)


def _write_field(field, args):
    if args.out:
        io.save_field(field, args.out, args.format)
    elif args.format == "pgm":
        raise UsageError("--format pgm needs --out")
    else:
        sys.stdout.write(io.field_to_csv(field.values, field.grid, io._field_meta(field)))
    if args.image:
        _save_image(field, args.image)


def _save_image(field, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x0, y0, x1, y1 = field.grid.extent
    fig, ax = plt.subplots(figsize=(5, 5))
    im = ax.imshow(field.values, origin="lower", extent=(x0, x1, y0, y1), cmap="viridis")
    fig.colorbar(im, ax=ax, shrink=0.8)
    ax.set_title(field.norm)
    fig.savefig(path, dpi=100, bbox_inches="tight")
    plt.close(fig)


def cmd_synth(args):
    grid = _grid(args)
    if args.random is not None:
        if args.scene:
            raise UsageError("give a scene file or --random, not both")
        x0, y0, x1, y1 = grid.extent
        pad = 2 * grid.spacing
        rng = np.random.default_rng(args.seed)
        scene = random_disjoint_convex_scene(rng, args.random, (x0 + pad, y0 + pad, x1 - pad, y1 - pad))
    elif args.scene:
        scene = io.load_scene(args.scene)
    else:
        raise UsageError("synth needs a scene file or --random K")
    try:
        raster = rasterize(scene, grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.scene_out:
        io.save_scene(scene, args.scene_out)
    _emit(io.field_to_csv(raster.values, raster.grid), args.out)


def cmd_integrate(args):
    print(euler_integral(io.load_raster(args.raster)))


def cmd_bessel(args):
    source = _source(args)
    norm = _norm(args.norm)
    if args.angles < 3:
        raise UsageError("--angles must be >= 3")
    if hasattr(source, "items"):
        field = bessel_transform(source, norm, _grid(args), args.dr, args.angles)
    else:
        field = bessel_transform_raster(source, norm, _grid(args, source.grid), args.dr, args.angles)
    _write_field(field, args)


def cmd_sva(args):
    source = _source(args)
    if args.angles < 3:
        raise UsageError("--angles must be >= 3")
    family = SvaFamily.rotated_linf(args.sva_rotations)
    if hasattr(source, "items"):
        field = sva_transform(source, family, _grid(args), args.dr, args.angles)
    else:
        grid = _grid(args, source.grid)
        members = [bessel_transform_raster(source, n, grid, args.dr, args.angles) for n in family.norms]
        field = sva_transform(None, family, grid, args.dr, args.angles, members=members)
    _write_field(field, args)


def cmd_fourier(args):
    from .index import fourier_index

    scene = io.load_scene(args.scene)
    rows = []
    for i in range(args.directions):
        d = Direction(2 * np.pi * i / args.directions)
        rows.append({"angle": d.angle, "numeric": fourier_transform(scene, d, args.dr), "index": fourier_index(scene, d)})
    if args.format == "json":
        _emit(json.dumps({"dr": args.dr, "rows": rows}, sort_keys=True, indent=1) + "\n", args.out)
    else:
        lines = ["angle,numeric,index"] + [f"{r['angle']!r},{r['numeric']!r},{r['index']!r}" for r in rows]
        _emit("\n".join(lines) + "\n", args.out)


def _parse_point(text):
    try:
        x, y = (float(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"bad point {text!r}; expected X,Y") from None
    return x, y


def cmd_index(args):
    if args.norm != "l2":
        raise UsageError("the index formula is only available for the l2 norm")
    scene = io.load_scene(args.scene)
    pts = [_parse_point(p) for p in args.points]
    vals = [bessel_index(scene, p) for p in pts]
    if args.format == "json":
        _emit(json.dumps([{"point": list(p), "value": v} for p, v in zip(pts, vals)], indent=1) + "\n", args.out)
    else:
        _emit("x,y,value\n" + "".join(f"{p[0]!r},{p[1]!r},{v!r}\n" for p, v in zip(pts, vals)), args.out)


def cmd_localize(args):
    source = _source(args)
    if args.angles < 3:
        raise UsageError("--angles must be >= 3")
    grid = _grid(args, None if hasattr(source, "items") else source.grid)
    try:
        report, _ = localize(source, grid, _norm(args.norm), args.dr, args.angles, args.tol)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _check_report(report)
    _emit(io.report_to_json(report), args.out)


def _check_report(report):
    depths = [m["depth"] for m in report.minima]
    if depths != sorted(depths):
        raise AssertionError("report minima are not sorted by depth")


def cmd_discriminate(args):
    scene = io.load_scene(args.scene)
    norms = [_norm(s) for s in (args.norm or ["l2", "linf"])]
    family = SvaFamily.rotated_linf(args.sva_rotations) if args.sva_rotations > 0 else None
    report, _ = discriminate(scene, norms, _grid(args), args.dr, args.angles, family, args.minima, args.tol)
    _emit(io.report_to_json(report), args.out)


COMMANDS = {
    "synth": cmd_synth,
    "integrate": cmd_integrate,
    "bessel": cmd_bessel,
    "sva": cmd_sva,
    "fourier": cmd_fourier,
    "index": cmd_index,
    "localize": cmd_localize,
    "discriminate": cmd_discriminate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"euler-tx {args.command}: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (io.InputError, OSError) as exc:
        print(f"euler-tx {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"euler-tx {args.command}: invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return 0


if __name__ == "__main__":
    sys.exit(main())
