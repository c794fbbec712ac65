"""Hopf-Lax representations and related tools for the limit Hamilton-Jacobi problems.

Forward (invaded side):
    Phi(x, t) = inf_{h(y) < t} (k + b) tau + |x - y|^2 / (4 b tau),  tau = t - h(y)
Backward (not yet invaded side):
    Phi(x, t) = sup_{h(y) < t} (k - b_) tau - |x - y|^2 / (4 b_ tau)
with k the minimal speed and b, b_ the tail rates at 1 and 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator
from scipy.optimize import minimize

from .levelset import LevelGraph, Orientation

SEEDS_PER_AXIS = 64
REFINE_TOL = 1e-10
ADMISSIBLE_TOL = 1e-12


class HJError(ValueError):
    pass


class HJDomainError(HJError):
    """Query point lies outside the region where the formula applies."""


class EmptyAdmissibleSetError(HJError):
    def __init__(self):
        super().__init__("boundary admits no backward representation here")


# -- parameters -------------------------------------------------------------------

@dataclass(frozen=True)
class HJParams:
    kappa_star: float
    beta_plus: float
    beta_minus: float
    kappa: float | None = None

    def __post_init__(self):
        if self.kappa_star <= 0 or self.beta_plus <= 0 or self.beta_minus <= 0:
            raise HJError("kappa_star and tail rates must be positive")
        if self.kappa is None:
            object.__setattr__(self, "kappa", self.kappa_star)
        if self.kappa <= 0:
            raise HJError("kappa must be positive")

    @property
    def K_plus(self) -> float:
        k, b, c = self.kappa_star, self.beta_plus, self.kappa
        return math.sqrt(1.0 + k / b + c * c / (4.0 * b * b))

    @property
    def K_minus(self) -> float:
        k, b, c = self.kappa_star, self.beta_minus, self.kappa
        return math.sqrt(1.0 - k / b + c * c / (4.0 * b * b))

    def with_kappa(self, kappa: float) -> "HJParams":
        return HJParams(self.kappa_star, self.beta_plus, self.beta_minus, kappa)

    @classmethod
    def from_profile(cls, profile, kappa: float | None = None) -> "HJParams":
        return cls(profile.kappa_star, profile.beta_plus, profile.beta_minus, kappa)

    @classmethod
    def bistable_cubic(cls, theta: float, kappa: float | None = None) -> "HJParams":
        """Closed-form constants for u(u - theta)(1 - u): speed (1-2 theta)/sqrt 2, both rates 1/sqrt 2."""
        ks = (1.0 - 2.0 * theta) / math.sqrt(2.0)
        fp1, fp0 = -(1.0 - theta), -theta
        bp = (-ks + math.sqrt(ks * ks - 4.0 * fp1)) / 2.0
        bm = (ks + math.sqrt(ks * ks - 4.0 * fp0)) / 2.0
        return cls(ks, bp, bm, kappa)


# -- boundary graphs ---------------------------------------------------------------

class BoundaryGraph:
    """A graph y -> h(y) over R^dim; ``+inf`` marks points where h is undefined."""

    dim: int

    def __call__(self, y) -> np.ndarray:
        raise NotImplementedError

    @property
    def lipschitz(self) -> float:
        raise NotImplementedError

    def check_admissible(self, kappa_star: float) -> None:
        """Blow-down boundaries need every slope |xi| equal to 1/kappa_star."""


@dataclass
class Planar(BoundaryGraph):
    xi: np.ndarray

    def __post_init__(self):
        self.xi = np.atleast_1d(np.asarray(self.xi, dtype=float))
        self.dim = self.xi.size

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        return y @ self.xi if self.dim else np.zeros(y.shape[:-1])

    @property
    def lipschitz(self) -> float:
        return float(np.linalg.norm(self.xi))

    def check_admissible(self, kappa_star: float) -> None:
        if abs(np.linalg.norm(self.xi) - 1.0 / kappa_star) > ADMISSIBLE_TOL * max(1.0, 1.0 / kappa_star):
            raise HJError(f"|xi| = {np.linalg.norm(self.xi)} differs from 1/kappa* = {1 / kappa_star}")


@dataclass
class SupportSet(BoundaryGraph):
    """h(y) = min over xi in Xi of xi . y (concave, 1-homogeneous)."""

    Xi: np.ndarray

    def __post_init__(self):
        Xi = np.asarray(self.Xi, dtype=float)
        if Xi.ndim == 1:
            Xi = Xi[:, None]
        if Xi.shape[0] == 0:
            raise HJError("support set must be nonempty")
        self.Xi = Xi
        self.dim = Xi.shape[1]

    def __call__(self, y):
        return support_representation(self.Xi, y)

    @property
    def lipschitz(self) -> float:
        return float(np.max(np.linalg.norm(self.Xi, axis=1)))

    def check_admissible(self, kappa_star: float) -> None:
        n = np.linalg.norm(self.Xi, axis=1)
        if np.any(np.abs(n - 1.0 / kappa_star) > ADMISSIBLE_TOL * max(1.0, 1.0 / kappa_star)):
            raise HJError("every direction in Xi must have length 1/kappa*")


@dataclass
class Sampled(BoundaryGraph):
    """Multilinear interpolation of a sampled level graph; +inf off the valid set."""

    graph: LevelGraph
    _interp: RegularGridInterpolator = field(init=False, repr=False)
    _mask: RegularGridInterpolator = field(init=False, repr=False)

    def __post_init__(self):
        g = self.graph
        self.dim = g.dim
        h = np.where(g.valid, g.heights, 0.0)
        self._interp = RegularGridInterpolator(g.axes, h, bounds_error=False, fill_value=np.nan)
        self._mask = RegularGridInterpolator(g.axes, g.valid.astype(float), bounds_error=False, fill_value=0.0)

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        shape = y.shape[:-1]
        pts = y.reshape(-1, self.dim)
        v = self._interp(pts)
        ok = self._mask(pts) > 1.0 - 1e-12
        return np.where(ok & np.isfinite(v), v, np.inf).reshape(shape)

    @property
    def lipschitz(self) -> float:
        from .levelset import lipschitz_estimate
        return lipschitz_estimate(self.graph).global_L


def support_representation(Xi, x):
    """min over xi in Xi of xi . x, vectorized over the leading axes of x."""
    Xi = np.asarray(Xi, dtype=float)
    if Xi.ndim == 1:
        Xi = Xi[:, None]
    if Xi.shape[0] == 0:
        raise HJError("support set must be nonempty")
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x[None]
    out = np.min(x @ Xi.T, axis=-1)
    return float(out) if out.ndim == 0 else out


# -- multi-start optimisation ------------------------------------------------------

@dataclass
class OptResult:
    value: float
    argopt: np.ndarray


def _multistart_min(obj, center: np.ndarray, radius: float, seeds: int = SEEDS_PER_AXIS,
                    n_refine: int = 4) -> OptResult:
    """Grid seeding over the box center +- radius, then Nelder-Mead from the best seeds."""
    dim = center.size
    if dim == 0:
        return OptResult(float(obj(center[None, :])[0]), center.copy())
    ticks = np.linspace(-radius, radius, seeds)
    mesh = np.meshgrid(*([ticks] * dim), indexing="ij")
    pts = center + np.stack([m.ravel() for m in mesh], axis=-1)
    pts = np.vstack([center[None, :], pts])
    vals = obj(pts)
    order = np.argsort(vals)
    best = OptResult(float(vals[order[0]]), pts[order[0]].copy())
    if not np.isfinite(best.value):
        return best
    step = 2.0 * radius / (seeds - 1)
    for i in order[:n_refine]:
        if not np.isfinite(vals[i]):
            break
        x0 = pts[i]
        simplex = np.vstack([x0] + [x0 + step * e for e in np.eye(dim)])
        res = minimize(lambda z: float(obj(z[None, :])[0]), x0, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": REFINE_TOL * max(1.0, radius),
                                "fatol": 1e-15, "maxiter": 4000 * dim, "maxfev": 8000 * dim})
        if res.fun < best.value:
            best = OptResult(float(res.fun), np.asarray(res.x, dtype=float))
    return best


def _as_point(x, dim: int) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.size != dim:
        raise HJError(f"point has dimension {x.size}, boundary has {dim}")
    return x


def _boundary_at(boundary: BoundaryGraph, x: np.ndarray) -> float:
    return float(np.asarray(boundary(x[None, :]))[0])


# -- forward / backward representations ------------------------------------------------

def forward_objective(boundary: BoundaryGraph, x: np.ndarray, t: float, kappa: float, beta: float):
    def obj(Y):
        tau = t - boundary(Y)
        d2 = np.sum((Y - x) ** 2, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = (kappa + beta) * tau + d2 / (4.0 * beta * tau)
        return np.where(tau > 0, v, np.inf)
    return obj


def hopf_lax_forward(x, t: float, boundary: BoundaryGraph, params: HJParams) -> OptResult:
    """Infimum over {h < t} of (k + b) tau + |x - y|^2 / (4 b tau)."""
    x = _as_point(x, boundary.dim)
    hx = _boundary_at(boundary, x)
    if not t > hx:
        raise HJDomainError(f"(x, t) is not on the invaded side: t={t}, h(x)={hx}")
    k, b = params.kappa_star, params.beta_plus
    obj = forward_objective(boundary, x, t, k, b)
    v0 = (k + b) * (t - hx)
    # objective >= (k+b) tau and >= |x-y|^2/(4 b tau): any improving y lies within this radius
    radius = max(4.0 * b * v0, 2.0 * v0 * math.sqrt(b / (k + b)))
    return _multistart_min(obj, x, radius)


def _backward_feasible(x: np.ndarray, t: float, boundary: BoundaryGraph) -> np.ndarray:
    if isinstance(boundary, Planar):
        n2 = float(boundary.xi @ boundary.xi)
        if n2 == 0.0:
            raise EmptyAdmissibleSetError()
        return x - (float(boundary.xi @ x) - t + 1.0) * boundary.xi / n2
    if isinstance(boundary, SupportSet):
        xi = boundary.Xi[0]
        n2 = float(xi @ xi)
        if n2 == 0.0:
            if np.any(np.linalg.norm(boundary.Xi, axis=1) > 0):
                xi = boundary.Xi[np.argmax(np.linalg.norm(boundary.Xi, axis=1))]
                n2 = float(xi @ xi)
            else:
                raise EmptyAdmissibleSetError()
        return x - (float(xi @ x) - t + 1.0) * xi / n2
    if isinstance(boundary, Sampled):
        pts = boundary.graph.points()
        hv = boundary.graph.heights[boundary.graph.valid]
        ok = hv < t
        if not ok.any():
            raise EmptyAdmissibleSetError()
        pts, hv = pts[ok], hv[ok]
        j = int(np.argmin(np.sum((pts - x) ** 2, axis=-1)))
        return pts[j]
    raise HJError(f"no feasible-point rule for {type(boundary).__name__}")


def hopf_lax_backward(x, t: float, boundary: BoundaryGraph, params: HJParams) -> OptResult:
    """Supremum over {h < t} of (k - b_) tau - |x - y|^2 / (4 b_ tau); returns the (negative) value."""
    k, b = params.kappa_star, params.beta_minus
    if b < k * (1.0 - 1e-12):
        raise HJError(f"backward representation needs beta_minus >= kappa_star ({b} < {k})")
    x = _as_point(x, boundary.dim)
    hx = _boundary_at(boundary, x)
    if not t < hx:
        raise HJDomainError(f"(x, t) is not on the uninvaded side: t={t}, h(x)={hx}")
    y0 = _backward_feasible(x, t, boundary)

    def neg(Y):
        tau = t - boundary(Y)
        d2 = np.sum((Y - x) ** 2, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            v = -(k - b) * tau + d2 / (4.0 * b * tau)
        return np.where(tau > 0, v, np.inf)

    vf = float(neg(y0[None, :])[0])
    if not np.isfinite(vf):
        raise EmptyAdmissibleSetError()
    if b - k > 1e-9 * k:
        radius = 2.0 * vf * math.sqrt(b / (b - k))
    else:
        radius = 4.0 * b * max(boundary.lipschitz, 1.0) * vf
    radius = max(radius, float(np.linalg.norm(y0 - x)))
    res = _multistart_min(neg, x, radius)
    if neg(y0[None, :])[0] < res.value:
        res = OptResult(vf, y0)
    return OptResult(-res.value, res.argopt)


# -- localized step ----------------------------------------------------------------------

@dataclass
class SampledSlice:
    """Values of Phi(., s) on a tensor grid; non-finite entries are excluded."""

    axes: tuple[np.ndarray, ...]
    values: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.axes)

    def spacing(self) -> np.ndarray:
        return np.array([a[1] - a[0] for a in self.axes])

    def lipschitz(self) -> float:
        v = self.values
        best = 0.0
        g2 = np.zeros(v.shape)
        for k, a in enumerate(self.axes):
            d = np.diff(v, axis=k) / (a[1] - a[0])
            d = np.where(np.isfinite(d), np.abs(d), 0.0)
            best = max(best, float(d.max(initial=0.0)))
            pad = [(0, 0)] * v.ndim
            pad[k] = (0, 1)
            g2 += np.pad(d, pad) ** 2
        return max(best, float(np.sqrt(g2).max(initial=0.0)))


@dataclass
class StepResult:
    value: float
    minimizer: np.ndarray


def _parabola(fm, f0, fp):
    den = fm - 2.0 * f0 + fp
    if not (np.isfinite(fm) and np.isfinite(fp)) or den <= 0:
        return 0.0, 0.0
    off = 0.5 * (fm - fp) / den
    off = min(max(off, -0.5), 0.5)
    return off, -0.125 * (fp - fm) ** 2 / den if abs(off) < 0.5 else 0.0


def local_hopf_lax_step(phi_slice: SampledSlice, x, eps: float, params: HJParams,
                        K: float | None = None) -> StepResult:
    """min over y in B_{K eps}(x) of Phi(y, t - eps) + (k + b) eps + |x - y|^2 / (4 b eps)."""
    if eps <= 0:
        raise HJError("eps must be positive")
    x = _as_point(x, phi_slice.dim)
    k, b = params.kappa_star, params.beta_plus
    if K is None:
        K = 4.0 * b * phi_slice.lipschitz() + 1.0
    rad = K * eps
    lo = np.array([a[0] for a in phi_slice.axes])
    hi = np.array([a[-1] for a in phi_slice.axes])
    if np.any(x - rad < lo - 1e-12) or np.any(x + rad > hi + 1e-12):
        raise HJError(f"slice does not cover the ball of radius {rad} around {x.tolist()}")
    sl = []
    for a, xi in zip(phi_slice.axes, x):
        i0 = int(np.searchsorted(a, xi - rad, side="left"))
        i1 = int(np.searchsorted(a, xi + rad, side="right"))
        sl.append(slice(i0, i1))
    sub_axes = [a[s] for a, s in zip(phi_slice.axes, sl)]
    mesh = np.meshgrid(*sub_axes, indexing="ij")
    d2 = sum((m - xi) ** 2 for m, xi in zip(mesh, x))
    vals = phi_slice.values[tuple(sl)] + (k + b) * eps + d2 / (4.0 * b * eps)
    vals = np.where((d2 <= rad * rad) & np.isfinite(vals), vals, np.inf)
    if not np.isfinite(vals).any():
        raise HJError("no finite slice values inside the ball")
    j = np.unravel_index(np.argmin(vals), vals.shape)
    f0 = float(vals[j])
    y = np.array([m[j] for m in mesh], dtype=float)
    value = f0
    h = phi_slice.spacing()
    for ax in range(vals.ndim):
        jm, jp = list(j), list(j)
        jm[ax] -= 1
        jp[ax] += 1
        if jm[ax] < 0 or jp[ax] >= vals.shape[ax]:
            continue
        off, corr = _parabola(float(vals[tuple(jm)]), f0, float(vals[tuple(jp)]))
        y[ax] += off * h[ax]
        value += corr
    return StepResult(value, y)


def hopf_lax_march(phi_slice: SampledSlice, eps: float, params: HJParams, n_steps: int,
                   K: float | None = None) -> SampledSlice:
    """Apply the localized step on every node whose ball stays covered, ``n_steps`` times.

    The covered region shrinks by K eps per step; returns the slice on what remains.
    """
    cur = phi_slice
    for _ in range(n_steps):
        KK = K if K is not None else 4.0 * params.beta_plus * cur.lipschitz() + 1.0
        rad = KK * eps
        keep = [(a >= a[0] + rad - 1e-12) & (a <= a[-1] - rad + 1e-12) for a in cur.axes]
        new_axes = tuple(a[m] for a, m in zip(cur.axes, keep))
        if any(a.size == 0 for a in new_axes):
            raise HJError("domain exhausted while marching")
        out = np.empty(tuple(a.size for a in new_axes))
        for idx in np.ndindex(out.shape):
            pt = np.array([a[i] for a, i in zip(new_axes, idx)])
            out[idx] = local_hopf_lax_step(cur, pt, eps, params, K=KK).value
        cur = SampledSlice(new_axes, out)
    return cur


# -- travelling-wave representation -------------------------------------------------------

def tw_value(x, boundary: BoundaryGraph, params: HJParams, region_sign: int) -> float:
    """Distance-like representation over the space-graph x_n = h(x').

    region +1: inf_y' K+ sqrt(|x'-y'|^2 + (x_n - h(y'))^2) - (c / 2b+)(x_n - h(y'))
    region -1: the negated K- expression with b- in place of b+.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xp, xn = x[:-1], float(x[-1])
    if xp.size != boundary.dim:
        raise HJError(f"boundary has dimension {boundary.dim}, expected {xp.size}")
    hx = float(np.asarray(boundary(xp[None, :]))[0])
    if region_sign == 1:
        if not xn > hx:
            raise HJDomainError("point is not above the boundary graph")
        K, c = params.K_plus, params.kappa / (2.0 * params.beta_plus)
    elif region_sign == -1:
        if not xn < hx:
            raise HJDomainError("point is not below the boundary graph")
        K, c = params.K_minus, params.kappa / (2.0 * params.beta_minus)
    else:
        raise HJError("region_sign must be +1 or -1")

    def obj(Y):
        d = xn - boundary(Y)
        r = np.sqrt(np.sum((Y - xp) ** 2, axis=-1) + d * d)
        return np.where(np.isfinite(d), K * r - c * d, np.inf)

    v0 = float(obj(xp[None, :])[0])
    if K > c:
        radius = abs(v0) / (K - c) + abs(xn - hx)
    else:
        radius = 10.0 * (abs(xn - hx) + 1.0) * (1.0 + boundary.lipschitz)
    res = _multistart_min(obj, xp, max(radius, 1e-12))
    return res.value if region_sign == 1 else -res.value


# -- characteristics -----------------------------------------------------------------------

@dataclass
class Characteristic:
    x0: np.ndarray
    t0: float
    p0: np.ndarray
    value_at_start: float
    hit_time: float
    hit_point: np.ndarray
    decay_rate: float
    residual: float
    beta_plus: float

    def point_at(self, s: float) -> np.ndarray:
        return self.x0 - 2.0 * self.beta_plus * (self.t0 - s) * self.p0

    def value_at(self, s: float) -> float:
        return self.value_at_start - self.decay_rate * (self.t0 - s)

    def to_dict(self) -> dict:
        return {"x0": self.x0.tolist(), "t0": self.t0, "p0": self.p0.tolist(),
                "value_at_start": self.value_at_start, "hit_time": self.hit_time,
                "hit_point": self.hit_point.tolist(), "decay_rate": self.decay_rate,
                "residual": self.residual}


def trace_characteristic(x0, t0: float, p0, value_at_start: float, boundary: BoundaryGraph,
                         params: HJParams) -> Characteristic:
    """Straight backward characteristic x(s) = x0 - 2 b (t0 - s) p0 until the value reaches zero."""
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    p0 = np.atleast_1d(np.asarray(p0, dtype=float))
    k, b = params.kappa_star, params.beta_plus
    rate = k + b + b * float(p0 @ p0)
    s0 = t0 - value_at_start / rate
    hit = x0 - 2.0 * b * (t0 - s0) * p0
    hb = float(np.asarray(boundary(hit[None, :]))[0]) if boundary.dim else 0.0
    return Characteristic(x0, float(t0), p0, float(value_at_start), float(s0), hit, rate,
                          abs(hb - s0), b)


# -- eikonal residual --------------------------------------------------------------------------

@dataclass
class EikonalResidual:
    residual: np.ndarray      # |grad h|^2 - target, NaN where excluded
    relative: np.ndarray      # residual / target
    ridge: np.ndarray         # detected gradient jumps
    target: float

    @property
    def max_abs_relative(self) -> float:
        r = self.relative[np.isfinite(self.relative)]
        return float(np.max(np.abs(r))) if r.size else math.nan

    @property
    def n_used(self) -> int:
        return int(np.isfinite(self.relative).sum())


def eikonal_residual(graph, params: HJParams, axes=None, margin: float | None = None,
                     jump_tol: float = 0.1, kind: str | None = None) -> EikonalResidual:
    """Centered-difference |grad h|^2 - target on a sampled graph, excluding ridges.

    ``graph`` is a LevelGraph, or a BoundaryGraph together with sampling ``axes``.
    Target: 1/k*^2 for time graphs, c^2/k*^2 - 1 for space graphs.
    A sample is a ridge when forward and backward differences along some axis
    differ by more than ``jump_tol`` relative; samples within ``margin``
    (default two grid spacings) of a ridge are excluded.
    """
    if isinstance(graph, LevelGraph):
        axes, h, valid = graph.axes, graph.heights, graph.valid
        kind = kind or ("time" if graph.orientation is Orientation.TIME else "space")
    else:
        if axes is None:
            raise HJError("sampling axes are required for an analytic boundary")
        axes = tuple(np.asarray(a, dtype=float) for a in axes)
        mesh = np.meshgrid(*axes, indexing="ij")
        h = np.asarray(graph(np.stack(mesh, axis=-1)), dtype=float)
        valid = np.isfinite(h)
        kind = kind or "time"
    ks = params.kappa_star
    target = 1.0 / ks**2 if kind == "time" else params.kappa**2 / ks**2 - 1.0
    dim = len(axes)
    spacing = [a[1] - a[0] for a in axes]
    if margin is None:
        margin = 2.0 * max(spacing)

    hv = np.where(valid, h, np.nan)
    g2 = np.zeros(h.shape)
    ridge = np.zeros(h.shape, dtype=bool)
    usable = valid.copy()
    for k in range(dim):
        fwd = np.full(h.shape, np.nan)
        bwd = np.full(h.shape, np.nan)
        lo = [slice(None)] * dim
        hi = [slice(None)] * dim
        lo[k], hi[k] = slice(None, -1), slice(1, None)
        d = (hv[tuple(hi)] - hv[tuple(lo)]) / spacing[k]
        fwd[tuple(lo)] = d
        bwd[tuple(hi)] = d
        cen = 0.5 * (fwd + bwd)
        usable &= np.isfinite(cen)
        scale = np.maximum(np.maximum(np.abs(fwd), np.abs(bwd)), 1e-12)
        with np.errstate(invalid="ignore"):
            ridge |= np.abs(fwd - bwd) > jump_tol * scale
        g2 += np.where(np.isfinite(cen), cen, 0.0) ** 2

    excl = _dilate(ridge, axes, margin)
    keep = usable & ~excl
    res = np.where(keep, g2 - target, np.nan)
    return EikonalResidual(res, res / abs(target) if target != 0 else res, ridge, target)


def _dilate(mask: np.ndarray, axes, margin: float) -> np.ndarray:
    if not mask.any() or margin <= 0:
        return mask.copy()
    from scipy.ndimage import distance_transform_edt
    spacing = [a[1] - a[0] for a in axes]
    dist = distance_transform_edt(~mask, sampling=spacing)
    return dist <= margin


def forward_pde_residual(values: np.ndarray, axes, times: np.ndarray, params: HJParams) -> np.ndarray:
    """Centered-difference Phi_t + b |grad Phi|^2 - k - b on a (time, *space) array of samples."""
    k, b = params.kappa_star, params.beta_plus
    dt = times[1] - times[0]
    pt = (values[2:] - values[:-2]) / (2.0 * dt)
    pt = pt[(slice(None),) + (slice(1, -1),) * len(axes)]
    g2 = 0.0
    for i, a in enumerate(axes):
        hx = a[1] - a[0]
        hi = [slice(1, -1)] + [slice(1, -1)] * len(axes)
        lo = [slice(1, -1)] + [slice(1, -1)] * len(axes)
        hi[i + 1] = slice(2, None)
        lo[i + 1] = slice(None, -2)
        g2 = g2 + ((values[tuple(hi)] - values[tuple(lo)]) / (2.0 * hx)) ** 2
    return pt + b * g2 - k - b
