"""Snapshot and graph files.

Snapshots are CSV with ``# key=value`` header lines followed by one row per
grid node (coordinates then u) in C order.  Floats are printed with 17
significant digits so a reload is bit-exact.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .levelset import LevelGraph, Orientation
from .rd_solver import Boundary, Field, Grid

FMT = "%.17g"


class SnapshotFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class UnsupportedDimensionError(SnapshotFormatError):
    pass


def atomic_write(path: str | Path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(v: float) -> str:
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return FMT % v


def snapshot_text(field: Field, eps: float | None = None, extra: dict | None = None) -> str:
    g = field.grid
    lines = [f"# dim={g.dim}",
             "# extents=" + ";".join(f"{_fmt(lo)},{_fmt(hi)}" for lo, hi in g.extents),
             f"# dx={_fmt(g.dx)}",
             f"# boundary={g.boundary.value}",
             f"# time={_fmt(field.time)}",
             "# shape=" + ",".join(str(n) for n in g.shape)]
    if eps is not None:
        lines.append(f"# eps={_fmt(eps)}")
    for k, v in (extra or {}).items():
        lines.append(f"# {k}={v}")
    names = ["x", "y"][:g.dim] + ["u"]
    lines.append(",".join(names))
    cols = [m.ravel() for m in g.mesh()] + [field.values.ravel()]
    body = np.column_stack(cols)
    out = "\n".join(lines) + "\n"
    out += "\n".join(",".join(_fmt(v) for v in row) for row in body) + "\n"
    return out


def write_snapshot(path: str | Path, field: Field, eps: float | None = None, extra: dict | None = None) -> None:
    atomic_write(path, snapshot_text(field, eps, extra))


def _parse_header(lines):
    meta, first_data = {}, None
    for n, line in enumerate(lines, start=1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            body = s[1:].strip()
            if "=" not in body:
                raise SnapshotFormatError(f"malformed header {s!r} (expected key=value)", n)
            k, v = body.split("=", 1)
            meta[k.strip()] = (v.strip(), n)
            continue
        first_data = n
        break
    return meta, first_data


def read_snapshot(path: str | Path) -> tuple[Field, dict]:
    """Returns the field and the remaining header metadata (e.g. ``eps``)."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    meta, first = _parse_header(lines)
    for key in ("dim", "extents", "dx", "time"):
        if key not in meta:
            raise SnapshotFormatError(f"missing header key {key!r}", 1)
    try:
        dim = int(meta["dim"][0])
    except ValueError:
        raise SnapshotFormatError("dim must be an integer", meta["dim"][1]) from None
    if dim not in (1, 2):
        raise UnsupportedDimensionError(f"unsupported dimension {dim}", meta["dim"][1])
    try:
        extents = tuple(tuple(float(v) for v in part.split(",")) for part in meta["extents"][0].split(";"))
        dx = float(meta["dx"][0])
        time = float(meta["time"][0])
    except ValueError as exc:
        raise SnapshotFormatError(str(exc), meta["extents"][1]) from None
    if len(extents) != dim or any(len(e) != 2 for e in extents):
        raise SnapshotFormatError("extents do not match dim", meta["extents"][1])
    boundary = Boundary(meta.get("boundary", ("neumann", 0))[0])
    try:
        grid = Grid(extents, dx, boundary)
    except ValueError as exc:
        raise SnapshotFormatError(str(exc), meta["dx"][1]) from None
    if first is None:
        raise SnapshotFormatError(f"no data rows; expected {int(np.prod(grid.shape))} rows")
    # column-name line
    data_lines = [ln for ln in lines[first:] if ln.strip()]
    expected = int(np.prod(grid.shape))
    if len(data_lines) != expected:
        raise SnapshotFormatError(f"expected {expected} data rows, found {len(data_lines)}", first + 1 + len(data_lines))
    vals = np.empty(expected)
    for i, ln in enumerate(data_lines):
        parts = ln.split(",")
        if len(parts) != dim + 1:
            raise SnapshotFormatError(f"expected {dim + 1} columns", first + 1 + i)
        try:
            vals[i] = float(parts[-1])
        except ValueError:
            raise SnapshotFormatError(f"bad number {parts[-1]!r}", first + 1 + i) from None
    rest = {k: v for k, (v, _) in meta.items() if k not in ("dim", "extents", "dx", "time", "boundary", "shape")}
    return Field(grid, time, vals.reshape(grid.shape)), rest


def phi_snapshot_text(axes, time: float, values: np.ndarray, eps: float) -> str:
    """Rescaled fields on a reference window reuse the snapshot layout with an ``eps`` header."""
    lines = [f"# dim={len(axes)}",
             "# extents=" + ";".join(f"{_fmt(a[0])},{_fmt(a[-1])}" for a in axes),
             "# dx=" + _fmt(axes[0][1] - axes[0][0]),
             f"# time={_fmt(time)}",
             "# shape=" + ",".join(str(a.size) for a in axes),
             f"# eps={_fmt(eps)}",
             ",".join(["x", "y"][:len(axes)] + ["phi"])]
    mesh = np.meshgrid(*axes, indexing="ij")
    body = np.column_stack([m.ravel() for m in mesh] + [values.ravel()])
    return "\n".join(lines) + "\n" + "\n".join(
        ",".join("nan" if np.isnan(v) else _fmt(v) for v in row) for row in body) + "\n"


# -- graphs ----------------------------------------------------------------------------

def write_graph(path: str | Path, graph: LevelGraph, lipschitz: dict | None = None) -> Path:
    """CSV of (base coords, height, valid) plus a JSON sidecar; returns the sidecar path."""
    path = Path(path)
    names = [f"x{i}" for i in range(graph.dim)] + ["height", "valid"]
    mesh = np.meshgrid(*graph.axes, indexing="ij") if graph.dim else []
    rows = [",".join(names)]
    flat_h = graph.heights.ravel()
    flat_v = graph.valid.ravel()
    coords = [m.ravel() for m in mesh]
    for i in range(flat_h.size):
        c = [_fmt(m[i]) for m in coords]
        h = "nan" if not flat_v[i] else _fmt(flat_h[i])
        rows.append(",".join(c + [h, str(int(flat_v[i]))]))
    atomic_write(path, "\n".join(rows) + "\n")
    side = path.with_suffix(path.suffix + ".json")
    meta = {"lambda": graph.lam, "orientation": graph.orientation.value,
            "shape": list(graph.heights.shape), "lipschitz_estimate": lipschitz}
    atomic_write(side, json.dumps(meta, indent=2, default=_json_default))
    return side


def read_graph(path: str | Path) -> LevelGraph:
    path = Path(path)
    meta = json.loads(path.with_suffix(path.suffix + ".json").read_text())
    data = np.genfromtxt(path, delimiter=",", skip_header=1, ndmin=2)
    shape = tuple(meta["shape"])
    dim = len(shape)
    axes = []
    for k in range(dim):
        col = data[:, k].reshape(shape)
        idx = [0] * dim
        idx[k] = slice(None)
        axes.append(np.asarray(col[tuple(idx)]))
    h = data[:, dim].reshape(shape)
    valid = data[:, dim + 1].reshape(shape).astype(bool)
    return LevelGraph(Orientation(meta["orientation"]), tuple(axes), h, float(meta["lambda"]), valid)


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if hasattr(o, "value"):
        return o.value
    raise TypeError(f"not serializable: {type(o).__name__}")


def write_json(path: str | Path, obj) -> None:
    atomic_write(path, json.dumps(obj, indent=2, default=_json_default) + "\n")
