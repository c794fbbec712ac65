"""Level sets as graphs: time-graphs t = h(x) and space-graphs x_n = h(x')."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .rd_solver import Field, SnapshotSeries


class LevelSetError(RuntimeError):
    pass


class MultipleCrossingError(LevelSetError):
    def __init__(self, points: np.ndarray, message: str):
        super().__init__(f"{message}: {len(points)} base points, first {points[:5].tolist()}")
        self.points = points


class Orientation(str, Enum):
    TIME = "time_graph"
    SPACE = "space_graph"


@dataclass
class LevelGraph:
    """Heights over a tensor grid of base points; ``valid`` marks where the level was found."""

    orientation: Orientation
    axes: tuple[np.ndarray, ...]
    heights: np.ndarray
    lam: float
    valid: np.ndarray

    def __post_init__(self):
        self.heights = np.asarray(self.heights, dtype=float)
        self.valid = np.asarray(self.valid, dtype=bool)
        self.heights = np.where(self.valid, self.heights, np.nan)
        for a in self.axes:
            if a.size > 1 and not np.all(np.diff(a) > 0):
                raise ValueError("base coordinates must be strictly increasing")

    @property
    def dim(self) -> int:
        return len(self.axes)

    def points(self) -> np.ndarray:
        """Valid base points as an (m, dim) array."""
        if self.dim == 0:
            return np.zeros((int(self.valid.sum()), 0))
        mesh = np.meshgrid(*self.axes, indexing="ij")
        return np.stack([m[self.valid] for m in mesh], axis=-1)


# -- extraction ---------------------------------------------------------------

class TimeGraphTracker:
    """Streaming extraction of t = h_lambda(x) from successive fields.

    Feed fields in time order with :meth:`update`; crossing times are
    interpolated linearly between consecutive fields.  Fields before
    ``t_start`` are ignored, which skips the initial-data transient (near the
    edge of an indicator the level dips and recovers once).
    """

    def __init__(self, lam: float, t_start: float = -math.inf):
        if not 0.0 < lam < 1.0:
            raise ValueError("lambda must lie in (0, 1)")
        self.lam = lam
        self.t_start = t_start
        self._prev: Field | None = None
        self.up_count = None
        self.height = None

    def update(self, f: Field) -> None:
        lam = self.lam
        if f.time < self.t_start:
            return
        if self._prev is None:
            self.up_count = np.zeros(f.values.shape, dtype=np.int32)
            self.height = np.full(f.values.shape, np.nan)
            self._prev = f.copy()
            return
        p = self._prev
        up = (p.values < lam) & (f.values >= lam)
        if up.any():
            frac = (lam - p.values[up]) / (f.values[up] - p.values[up])
            self.height[up] = p.time + frac * (f.time - p.time)
            self.up_count[up] += 1
        self._prev = f.copy()

    def __call__(self, f: Field) -> None:
        self.update(f)

    def graph(self) -> LevelGraph:
        if self._prev is None:
            raise LevelSetError("no fields were fed to the tracker")
        grid = self._prev.grid
        multi = self.up_count > 1
        if multi.any():
            pts = np.argwhere(multi)
            raise MultipleCrossingError(pts, f"level {self.lam} crossed upward more than once")
        return LevelGraph(Orientation.TIME, grid.axes, self.height.copy(), self.lam, self.up_count == 1)


def extract_graph_time(series: SnapshotSeries, lam: float, t_start: float = -math.inf) -> LevelGraph:
    """h_lambda(x) = interpolated upward crossing time; invalid where no crossing was recorded."""
    tr = TimeGraphTracker(lam, t_start)
    for f in series.fields:
        tr.update(f)
    return tr.graph()


def extract_graph_space(field: Field, lam: float, axis: int = -1) -> LevelGraph:
    """Position along ``axis`` where u crosses lambda, for every transverse line."""
    grid = field.grid
    axis = axis % grid.dim
    u = np.moveaxis(field.values, axis, -1)
    x = grid.axis(axis)
    s = np.sign(u - lam)
    s[s == 0] = 1
    changes = np.abs(np.diff(s, axis=-1)) > 0
    count = changes.sum(axis=-1)
    if np.any(count > 1):
        raise MultipleCrossingError(np.argwhere(count > 1), f"level {lam} crossed more than once along axis {axis}")
    valid = count == 1
    i = np.argmax(changes, axis=-1)
    ua = np.take_along_axis(u, i[..., None], -1)[..., 0]
    ub = np.take_along_axis(u, (i + 1)[..., None], -1)[..., 0]
    with np.errstate(invalid="ignore", divide="ignore"):
        h = x[i] + (lam - ua) / (ub - ua) * (x[i + 1] - x[i])
    axes = tuple(grid.axis(k) for k in range(grid.dim) if k != axis)
    return LevelGraph(Orientation.SPACE, axes, np.where(valid, h, np.nan), lam, valid)


# -- analysis -------------------------------------------------------------------

@dataclass
class LipschitzEstimate:
    global_L: float
    per_pair_max_location: tuple[np.ndarray, np.ndarray]
    n_pairs: int


ALL_PAIRS_LIMIT = 2000


def lipschitz_estimate(graph: LevelGraph, window: int = 2) -> LipschitzEstimate:
    """Max |dh| / |dx| over valid pairs.

    All pairs up to 2000 valid samples; above that, pairs whose grid
    offsets are at most ``window`` along every axis.
    """
    pts = graph.points()
    vals = graph.heights[graph.valid]
    m = vals.size
    if m < 2:
        raise LevelSetError("fewer than two valid samples")
    if m <= ALL_PAIRS_LIMIT:
        best, arg = -1.0, (0, 1)
        n_pairs = 0
        for i in range(m - 1):
            d = np.linalg.norm(pts[i + 1:] - pts[i], axis=-1)
            r = np.abs(vals[i + 1:] - vals[i]) / d
            n_pairs += r.size
            j = int(np.argmax(r))
            if r[j] > best:
                best, arg = float(r[j]), (i, i + 1 + j)
        return LipschitzEstimate(best, (pts[arg[0]], pts[arg[1]]), n_pairs)

    h = graph.heights
    mesh = np.meshgrid(*graph.axes, indexing="ij")
    best, loc, n_pairs = -1.0, None, 0
    offsets = np.array(np.meshgrid(*[np.arange(-window, window + 1)] * graph.dim, indexing="ij")).reshape(graph.dim, -1).T
    for off in offsets:
        # half the offsets suffice by symmetry
        nz = off[np.nonzero(off)[0]]
        if nz.size == 0 or nz[0] < 0:
            continue
        src = tuple(slice(max(0, -o), h.shape[k] - max(0, o)) for k, o in enumerate(off))
        dst = tuple(slice(max(0, o), h.shape[k] - max(0, -o)) for k, o in enumerate(off))
        a, b = h[src], h[dst]
        ok = graph.valid[src] & graph.valid[dst]
        if not ok.any():
            continue
        dist = np.sqrt(sum((mm[dst] - mm[src]) ** 2 for mm in mesh))
        r = np.where(ok, np.abs(b - a) / dist, -1.0)
        n_pairs += int(ok.sum())
        j = np.unravel_index(np.argmax(r), r.shape)
        if r[j] > best:
            best = float(r[j])
            p1 = np.array([mm[src][j] for mm in mesh])
            p2 = np.array([mm[dst][j] for mm in mesh])
            loc = (p1, p2)
    return LipschitzEstimate(best, loc, n_pairs)


@dataclass
class MonotonicityRatio:
    min_ratio: float
    location: tuple | None
    n_nodes: int


def monotonicity_ratio(series: SnapshotSeries, t_index: int, grad_floor: float = 1e-8) -> MonotonicityRatio:
    """min over interior nodes of u_t / |grad u| (centered differences)."""
    if not 0 < t_index < len(series) - 1:
        raise IndexError("t_index needs a neighbour on both sides")
    before, now, after = series[t_index - 1], series[t_index], series[t_index + 1]
    ut = (after.values - before.values) / (after.time - before.time)
    dx = now.grid.dx
    u = now.values
    inner = tuple(slice(1, -1) for _ in range(u.ndim))
    g2 = np.zeros(tuple(s - 2 for s in u.shape))
    for k in range(u.ndim):
        hi = tuple(slice(2, None) if j == k else slice(1, -1) for j in range(u.ndim))
        lo = tuple(slice(None, -2) if j == k else slice(1, -1) for j in range(u.ndim))
        g2 += ((u[hi] - u[lo]) / (2 * dx)) ** 2
    grad = np.sqrt(g2)
    ut = ut[inner]
    ok = grad > grad_floor
    if not ok.any():
        return MonotonicityRatio(math.inf, None, 0)
    ratio = np.where(ok, ut / np.where(ok, grad, 1.0), np.inf)
    j = np.unravel_index(np.argmin(ratio), ratio.shape)
    loc = tuple(float(now.grid.axis(k)[j[k] + 1]) for k in range(u.ndim))
    return MonotonicityRatio(float(ratio[j]), loc, int(ok.sum()))


def success_range(series: SnapshotSeries, levels) -> list[float]:
    """Levels for which time-graph extraction succeeds with at least one valid sample."""
    good = []
    for lam in levels:
        try:
            g = extract_graph_time(series, lam)
        except LevelSetError:
            continue
        if g.valid.any():
            good.append(float(lam))
    return good
