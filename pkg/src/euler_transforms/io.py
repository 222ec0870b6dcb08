"""Scene JSON, field CSV/PGM and report JSON serialization."""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .euler_core import GridFunction, GridSpec
from .geometry import Polygon, Scene
from .transforms import TransformField


class InputError(ValueError):
    """Malformed input file; the message names the offending line or field."""


# --------------------------------------------------------------------------
# scenes


def scene_from_dict(data: dict) -> Scene:
    if not isinstance(data, dict):
        raise InputError("scene: top level must be an object")
    unknown = set(data) - {"polygons", "disks"}
    if unknown:
        raise InputError(f"scene: unknown keys {sorted(unknown)}")
    items = []
    for i, entry in enumerate(data.get("polygons", [])):
        where = f"polygons[{i}]"
        try:
            verts = np.asarray(entry["vertices"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{where}.vertices: {exc}") from None
        if verts.ndim != 2 or verts.shape[1] != 2 or not np.all(np.isfinite(verts)):
            raise InputError(f"{where}.vertices: expected a list of finite [x, y] pairs")
        weight = _weight(entry, where)
        try:
            items.append((Polygon.ccw(verts), weight))
        except ValueError as exc:
            raise InputError(f"{where}: {exc}") from None
    for i, entry in enumerate(data.get("disks", [])):
        where = f"disks[{i}]"
        try:
            center = [float(c) for c in entry["center"]]
            radius = float(entry["radius"])
            ngon = int(entry.get("ngon", 128))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{where}: {exc!r}") from None
        if len(center) != 2 or not radius > 0 or ngon < 3:
            raise InputError(f"{where}: need a 2D center, radius > 0 and ngon >= 3")
        items.append((Polygon.regular(center, radius, ngon), _weight(entry, where)))
    return Scene(tuple(items))


def _weight(entry: dict, where: str) -> int:
    w = entry.get("weight", 1)
    if not isinstance(w, int) or isinstance(w, bool) or w < 1:
        raise InputError(f"{where}.weight: must be a positive integer, got {w!r}")
    return w


def scene_to_dict(scene: Scene) -> dict:
    return {
        "polygons": [
            {"vertices": [[float(x), float(y)] for x, y in p.vertices], "weight": w} for p, w in scene.items
        ]
    }


def load_scene(path: str | Path) -> Scene:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return scene_from_dict(data)


def save_scene(scene: Scene, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scene_to_dict(scene), indent=1) + "\n")


# --------------------------------------------------------------------------
# fields and rasters (CSV)


def _format(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def field_to_csv(values: np.ndarray, grid: GridSpec, meta: dict | None = None) -> str:
    lines = []
    if meta:
        lines.append("#" + ",".join(f"{k}={v}" for k, v in meta.items()))
    lines += [
        f"width,{grid.width}",
        f"height,{grid.height}",
        f"origin,{_format(grid.origin[0])},{_format(grid.origin[1])}",
        f"spacing,{_format(grid.spacing)}",
    ]
    for row in values:
        lines.append(",".join(_format(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_field_csv(text: str, integer: bool = False) -> tuple[GridSpec, np.ndarray, dict]:
    lines = text.splitlines()
    meta: dict = {}
    body = []
    for no, line in enumerate(lines, start=1):
        if line.startswith("#"):
            for kv in line[1:].split(","):
                if "=" in kv:
                    k, v = kv.split("=", 1)
                    meta[k] = v
        elif line.strip():
            body.append((no, line))
    if len(body) < 4:
        raise InputError("field file: missing 4-line header (width, height, origin, spacing)")
    header = {}
    for (no, line), key in zip(body[:4], ("width", "height", "origin", "spacing")):
        parts = line.split(",")
        if parts[0] != key:
            raise InputError(f"line {no}: expected '{key},...', got {line!r}")
        header[key] = parts[1:]
    try:
        grid = GridSpec(
            int(header["width"][0]),
            int(header["height"][0]),
            (float(header["origin"][0]), float(header["origin"][1])),
            float(header["spacing"][0]),
        )
    except (ValueError, IndexError) as exc:
        raise InputError(f"field header: {exc}") from None
    rows = body[4:]
    if len(rows) != grid.height:
        raise InputError(f"field file: expected {grid.height} data rows, found {len(rows)}")
    values = np.empty(grid.shape, dtype=np.int64 if integer else float)
    for r, (no, line) in enumerate(rows):
        parts = line.split(",")
        if len(parts) != grid.width:
            raise InputError(f"line {no}: expected {grid.width} values, found {len(parts)}")
        try:
            values[r] = [int(p) if integer else float(p) for p in parts]
        except ValueError as exc:
            raise InputError(f"line {no}: {exc}") from None
    return grid, values, meta


def save_raster(h: GridFunction, path: str | Path) -> None:
    Path(path).write_text(field_to_csv(h.values, h.grid))


def load_raster(path: str | Path) -> GridFunction:
    grid, values, _ = parse_field_csv(Path(path).read_text(), integer=True)
    try:
        return GridFunction(grid, values)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _field_meta(f: TransformField) -> dict:
    return {"norm": f.norm, "dr": _format(f.dr), "m": f.m, "r_max": _format(f.r_max)}


def save_field(f: TransformField, path: str | Path, fmt: str = "csv") -> None:
    if fmt == "csv":
        Path(path).write_text(field_to_csv(f.values, f.grid, _field_meta(f)))
    elif fmt == "pgm":
        Path(path).write_bytes(field_to_pgm(f))
    elif fmt == "json":
        data = {"grid": _grid_json(f.grid), **_field_meta(f), "values": [[float(v) for v in row] for row in f.values]}
        Path(path).write_text(json.dumps(data, sort_keys=True) + "\n")
    else:
        raise ValueError(f"unknown field format {fmt!r}")


def _grid_json(g: GridSpec) -> dict:
    return {"width": g.width, "height": g.height, "origin": list(g.origin), "spacing": g.spacing}


def load_field(path: str | Path) -> TransformField:
    path = Path(path)
    raw = path.read_bytes()
    if raw.startswith(b"P5"):
        return field_from_pgm(raw)
    text = raw.decode()
    if text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
            g = data["grid"]
            grid = GridSpec(g["width"], g["height"], tuple(g["origin"]), g["spacing"])
            return TransformField(grid, np.array(data["values"], dtype=float), data["norm"],
                                  float(data["dr"]), int(data["m"]), float(data["r_max"]))
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"{path}: {exc!r}") from None
    grid, values, meta = parse_field_csv(text)
    try:
        return TransformField(grid, values, meta.get("norm", ""), float(meta.get("dr", "nan")),
                              int(meta.get("m", 0)), float(meta.get("r_max", "nan")))
    except ValueError as exc:
        raise InputError(f"{path}: bad metadata: {exc}") from None


# --------------------------------------------------------------------------
# 16-bit PGM: image row 0 is the top (largest y) grid row


def field_to_pgm(f: TransformField) -> bytes:
    v = f.values
    lo, hi = float(v.min()), float(v.max())
    scale = (hi - lo) / 65535 if hi > lo else 1.0
    q = np.rint((v - lo) / scale).astype(">u2")[::-1]
    g = f.grid
    header = (
        f"P5\n# offset={lo!r} scale={scale!r}\n"
        f"# origin={g.origin[0]!r},{g.origin[1]!r} spacing={g.spacing!r}\n"
        f"# norm={f.norm} dr={f.dr!r} m={f.m} r_max={f.r_max!r}\n"
        f"{g.width} {g.height}\n65535\n"
    )
    return header.encode() + q.tobytes()


def field_from_pgm(raw: bytes) -> TransformField:
    meta = {}
    tokens = []
    pos = 2
    while len(tokens) < 3:
        end = raw.index(b"\n", pos)
        line = raw[pos:end].decode().strip()
        pos = end + 1
        if line.startswith("#"):
            for kv in line[1:].split():
                k, v = kv.split("=", 1)
                meta[k] = v
        elif line:
            tokens += line.split()
    width, height, maxval = (int(t) for t in tokens)
    if maxval != 65535:
        raise InputError("PGM: only 16-bit fields are supported")
    q = np.frombuffer(raw[pos:pos + 2 * width * height], dtype=">u2").reshape(height, width)[::-1]
    offset, scale = float(meta["offset"]), float(meta["scale"])
    ox, oy = (float(t) for t in meta["origin"].split(","))
    grid = GridSpec(width, height, (ox, oy), float(meta["spacing"]))
    return TransformField(grid, q.astype(float) * scale + offset, meta.get("norm", ""),
                          float(meta.get("dr", "nan")), int(meta.get("m", 0)), float(meta.get("r_max", "nan")))


# --------------------------------------------------------------------------
# reports


def report_to_json(report) -> str:
    data = report.to_dict() if hasattr(report, "to_dict") else report
    return json.dumps(_clean(data), sort_keys=True, indent=1) + "\n"


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj
