"""Explicit finite-difference solver for u_t = Laplacian(u) + f(u) in 1D and 2D.

Forward Euler with the 5-point (3-point in 1D) Laplacian.  Under the step
bound ``dt * (2 dim / dx^2 + Lip f) <= 1`` the update is a monotone map of
the previous snapshot, so the discrete comparison principle and the
invariant region [0, 1] hold exactly.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .nonlinearity import NonlinearitySpec, evaluate

ROUNDOFF = 1e-12
GUARD_CELLS = 10


class SolverError(RuntimeError):
    pass


class CFLError(SolverError):
    def __init__(self, dt: float, dt_max: float):
        super().__init__(f"time step {dt} exceeds the admissible maximum {dt_max}")
        self.dt = dt
        self.dt_max = dt_max


class FrontError(SolverError):
    pass


class Boundary(str, Enum):
    NEUMANN = "neumann"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class Grid:
    """Uniform node-centred grid; ``extents`` are per-axis (min, max) node coordinates."""

    extents: tuple[tuple[float, float], ...]
    dx: float
    boundary: Boundary = Boundary.NEUMANN

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"only 1D and 2D grids are supported, got dim={self.dim}")
        if self.dx <= 0:
            raise ValueError("dx must be positive")
        for lo, hi in self.extents:
            n = (hi - lo) / self.dx
            if abs(n - round(n)) > 1e-6 * max(1.0, n):
                raise ValueError(f"extent [{lo}, {hi}] is not a multiple of dx={self.dx}")
            if round(n) < 16:
                raise ValueError("at least 16 cells per axis are required")

    @property
    def dim(self) -> int:
        return len(self.extents)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(int(round((hi - lo) / self.dx)) + 1 for lo, hi in self.extents)

    def axis(self, i: int) -> np.ndarray:
        lo, _ = self.extents[i]
        return lo + self.dx * np.arange(self.shape[i])

    @property
    def axes(self) -> tuple[np.ndarray, ...]:
        return tuple(self.axis(i) for i in range(self.dim))

    def mesh(self) -> tuple[np.ndarray, ...]:
        return np.meshgrid(*self.axes, indexing="ij")

    def radius(self) -> np.ndarray:
        return np.sqrt(sum(c**2 for c in self.mesh()))

    @classmethod
    def uniform(cls, lo: float, hi: float, dx: float, dim: int = 1,
                boundary: Boundary | str = Boundary.NEUMANN) -> "Grid":
        return cls(tuple((float(lo), float(hi)) for _ in range(dim)), float(dx), Boundary(boundary))


@dataclass
class Field:
    grid: Grid
    time: float
    values: np.ndarray

    def copy(self) -> "Field":
        return Field(self.grid, self.time, self.values.copy())


@dataclass
class SnapshotSeries:
    fields: list[Field] = field(default_factory=list)
    dt_record: float = 0.0

    def append(self, f: Field) -> None:
        if self.fields:
            if f.time <= self.fields[-1].time:
                raise ValueError("snapshot times must be strictly increasing")
            if f.grid != self.fields[0].grid:
                raise ValueError("snapshots must share one grid")
        self.fields.append(f)

    @property
    def times(self) -> np.ndarray:
        return np.array([f.time for f in self.fields])

    @property
    def grid(self) -> Grid:
        return self.fields[0].grid

    def __len__(self) -> int:
        return len(self.fields)

    def __getitem__(self, i) -> Field:
        return self.fields[i]


# -- initial data ------------------------------------------------------------

def init_indicator(grid: Grid, R: float, b: float) -> Field:
    """(1 - b) on the open ball |x| < R, 0 elsewhere."""
    if R <= 0 or not 0 < b < 1:
        raise ValueError("need R > 0 and 0 < b < 1")
    for lo, hi in grid.extents:
        if not (lo < -R and R < hi):
            raise ValueError(f"ball of radius {R} does not fit strictly inside [{lo}, {hi}]")
    vals = np.where(grid.radius() < R, 1.0 - b, 0.0)
    return Field(grid, 0.0, vals)


def init_constant(grid: Grid, value: float) -> Field:
    return Field(grid, 0.0, np.full(grid.shape, float(value)))


def init_planar(grid: Grid, profile: Callable, shift: float = 0.0, direction=None, t: float = 0.0,
                kappa: float = 0.0) -> Field:
    """u = g(x . e + kappa t + shift), a planar wave invading towards -e."""
    coords = grid.mesh()
    e = np.zeros(grid.dim)
    e[-1 if direction is None else 0] = 1.0
    if direction is not None:
        e = np.asarray(direction, dtype=float)
        e = e / np.linalg.norm(e)
    s = sum(c * ei for c, ei in zip(coords, e))
    return Field(grid, t, np.asarray(profile(s + kappa * t + shift), dtype=float))


def init_vfront(grid: Grid, profile: Callable, half_width: float, axis: int = 0) -> Field:
    """Two colliding planar fronts: u ~ 1 for |x_axis| > half_width, ~ 0 inside the strip."""
    c = grid.mesh()[axis]
    return Field(grid, 0.0, np.asarray(profile(np.abs(c) - half_width), dtype=float))


# -- time stepping -------------------------------------------------------------

def max_dt(grid: Grid, spec: NonlinearitySpec) -> float:
    """Largest dt keeping the explicit update monotone."""
    return 1.0 / (2.0 * grid.dim / grid.dx**2 + spec.lipschitz)


def _workers() -> int:
    env = os.environ.get("FRONTLAB_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _padded(u: np.ndarray, boundary: Boundary) -> np.ndarray:
    # Neumann: mirror ghost nodes (u_{-1} = u_1)
    mode = "reflect" if boundary is Boundary.NEUMANN else "wrap"
    return np.pad(u, 1, mode=mode)


def _update_block(p: np.ndarray, u: np.ndarray, out: np.ndarray, r: float, dt: float,
                  spec: NonlinearitySpec, rows: slice) -> None:
    """New values for rows ``rows`` of u from the padded previous snapshot p."""
    i0, i1 = rows.start, rows.stop
    if u.ndim == 1:
        c = u[i0:i1]
        lap = p[i0:i1] + p[i0 + 2:i1 + 2] - 2.0 * c
    else:
        c = u[i0:i1]
        lap = (p[i0:i1, 1:-1] + p[i0 + 2:i1 + 2, 1:-1]
               + p[i0 + 1:i1 + 1, :-2] + p[i0 + 1:i1 + 1, 2:] - 4.0 * c)
    out[i0:i1] = c + r * lap + dt * evaluate(spec, c, check=False)


def step(field: Field, spec: NonlinearitySpec, dt: float, workers: int | None = None) -> Field:
    """One forward-Euler step; refuses time steps above :func:`max_dt`."""
    grid = field.grid
    dt_max = max_dt(grid, spec)
    if dt > dt_max * (1.0 + 1e-12):
        raise CFLError(dt, dt_max)
    u = field.values
    p = _padded(u, grid.boundary)
    out = np.empty_like(u)
    r = dt / grid.dx**2
    n = u.shape[0]
    w = min(workers or _workers(), n)
    if w <= 1:
        _update_block(p, u, out, r, dt, spec, slice(0, n))
    else:
        bounds = np.linspace(0, n, w + 1).astype(int)
        with ThreadPoolExecutor(max_workers=w) as ex:
            list(ex.map(lambda k: _update_block(p, u, out, r, dt, spec, slice(bounds[k], bounds[k + 1])),
                        range(w)))
    lo, hi = out.min(), out.max()
    if lo < -ROUNDOFF or hi > 1.0 + ROUNDOFF:
        raise SolverError(f"invariant region violated: range [{lo}, {hi}]")
    np.clip(out, 0.0, 1.0, out=out)
    return Field(grid, field.time + dt, out)


@dataclass
class SimulationConfig:
    grid: Grid
    spec: NonlinearitySpec
    initial: Field
    T: float
    dt: float | None = None
    record_every: int = 1
    workers: int | None = None


def simulate(config: SimulationConfig, callback: Callable[[Field], None] | None = None) -> SnapshotSeries:
    """March to time T, recording every ``record_every`` steps (plus the last step).

    ``callback`` sees every step (including the initial field), which lets
    streaming analyses run without storing snapshots.
    """
    dt = config.dt if config.dt is not None else max_dt(config.grid, config.spec)
    nsteps = int(math.ceil(config.T / dt - 1e-9)) if config.T > 0 else 0
    u = config.initial
    if u.grid != config.grid:
        raise ValueError("initial field lives on a different grid")
    series = SnapshotSeries(dt_record=dt * config.record_every)
    series.append(u)
    if callback is not None:
        callback(u)
    for k in range(1, nsteps + 1):
        u = step(u, config.spec, dt, workers=config.workers)
        # keep t exact multiples of dt
        u.time = k * dt + config.initial.time
        if callback is not None:
            callback(u)
        if k % config.record_every == 0 or k == nsteps:
            series.append(u)
    return series


# -- front measurements --------------------------------------------------------

def rightmost_crossing(x: np.ndarray, u: np.ndarray, lam: float) -> float | None:
    """Position of the rightmost downward lambda-crossing, linear interpolation."""
    above = u >= lam
    idx = np.nonzero(above[:-1] & ~above[1:])[0]
    if idx.size == 0:
        return None
    i = idx[-1]
    return float(x[i] + (u[i] - lam) / (u[i] - u[i + 1]) * (x[i + 1] - x[i]))


@dataclass
class SpeedFit:
    speed: float
    r2: float
    times: np.ndarray = field(repr=False)
    positions: np.ndarray = field(repr=False)


def front_positions(series: SnapshotSeries, lam: float, window: tuple[float, float] | None = None):
    grid = series.grid
    if grid.dim != 1:
        raise ValueError("front positions are measured on 1D runs")
    x = grid.axis(0)
    ts, xs = [], []
    for f in series.fields:
        if window is not None and not (window[0] <= f.time <= window[1]):
            continue
        pos = rightmost_crossing(x, f.values, lam)
        if pos is None:
            raise FrontError(f"level {lam} not present at t={f.time}")
        if x[-1] - pos < GUARD_CELLS * grid.dx:
            raise FrontError(f"front within {GUARD_CELLS} cells of the boundary at t={f.time}")
        ts.append(f.time)
        xs.append(pos)
    return np.array(ts), np.array(xs)


def measure_front_speed(series: SnapshotSeries, lam: float, window: tuple[float, float]) -> SpeedFit:
    """Least-squares slope of the rightmost lambda-crossing against time."""
    t, x = front_positions(series, lam, window)
    if t.size < 2:
        raise FrontError("fewer than two snapshots inside the window")
    slope, intercept = np.polyfit(t, x, 1)
    resid = x - (slope * t + intercept)
    ss_tot = np.sum((x - x.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 0.0
    return SpeedFit(float(slope), float(r2), t, x)


@dataclass
class ConeReport:
    kappa_star: float
    b: float
    delta: float
    D_grace: float
    rows: list[dict]
    passed: bool


def check_cone_propagation(series: SnapshotSeries, kappa_star: float, b: float, delta: float,
                           D_grace: float) -> ConeReport:
    """Is u > 1 - b throughout |x| < (kappa* - delta)(t - D_grace) at every recorded t >= D_grace?"""
    grid = series.grid
    r = grid.radius()
    speed = kappa_star - delta
    rows = []
    ok = True
    for f in series.fields:
        if f.time < D_grace:
            continue
        rad = speed * (f.time - D_grace)
        mask = r < rad
        if not mask.any():
            # the open cone section holds no grid node yet: nothing to check
            rows.append({"time": f.time, "cone_radius": rad, "min_u": math.nan, "pass": True})
            continue
        m = float(f.values[mask].min())
        good = m > 1.0 - b
        ok &= good
        rows.append({"time": f.time, "cone_radius": rad, "min_u": m, "pass": bool(good)})
    return ConeReport(kappa_star, b, delta, D_grace, rows, bool(ok))
