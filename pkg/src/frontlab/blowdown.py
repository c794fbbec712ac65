"""Phi = g^{-1}(u), the eps-rescaling Phi_eps(x, t) = eps Phi(x/eps, t/eps), and convergence diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .hamilton_jacobi import (HJError, HJParams, Sampled, hopf_lax_backward, hopf_lax_forward)
from .levelset import LevelGraph, lipschitz_estimate
from .rd_solver import Field
from .wave1d import WaveProfile, profile_inverse

CLAMP = (1e-6, 1.0 - 1e-6)


class BlowdownError(RuntimeError):
    pass


class CoverageError(BlowdownError):
    def __init__(self, required: float, available: tuple[float, float]):
        super().__init__(f"source window [{available[0]}, {available[1]}] does not cover the "
                         f"required extent [-{required}, {required}]")
        self.required = required


@dataclass
class PhiField:
    """Extended-real Phi on a tensor grid: +inf where u > hi, -inf where u < lo."""

    axes: tuple[np.ndarray, ...]
    time: float
    values: np.ndarray
    clamp_lo: float = CLAMP[0]
    clamp_hi: float = CLAMP[1]
    eps: float = 1.0

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def finite(self) -> np.ndarray:
        return np.isfinite(self.values)

    def mesh(self):
        return np.meshgrid(*self.axes, indexing="ij")


def phi_from_u(field: Field, profile: WaveProfile, clamp: tuple[float, float] = CLAMP) -> PhiField:
    lo, hi = clamp
    if not 0.0 < lo < hi < 1.0:
        raise ValueError("clamp band must satisfy 0 < lo < hi < 1")
    u = field.values
    band = (u >= lo) & (u <= hi)
    vals = np.full(u.shape, np.nan)
    if band.any():
        vals[band] = profile_inverse(profile, u[band])
    vals[u > hi] = np.inf
    vals[u < lo] = -np.inf
    return PhiField(field.grid.axes, field.time, vals, lo, hi)


# -- resampling ---------------------------------------------------------------------------

def reference_axes(dim: int, n: int = 65, half_width: float = 1.0) -> tuple[np.ndarray, ...]:
    return tuple(np.linspace(-half_width, half_width, n) for _ in range(dim))


def _check_cover(src_axes, ref_axes, eps: float) -> None:
    for a, r in zip(src_axes, ref_axes):
        need_lo, need_hi = r[0] / eps, r[-1] / eps
        tol = 1e-9 * max(1.0, abs(need_lo), abs(need_hi))
        if need_lo < a[0] - tol or need_hi > a[-1] + tol:
            raise CoverageError(max(abs(need_lo), abs(need_hi)), (float(a[0]), float(a[-1])))


def _sample_extended(axes, values: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Multilinear interpolation that keeps +-inf sentinels.

    A target point whose stencil touches a sentinel takes the sentinel of its
    nearest source node when that node is a sentinel, and otherwise the
    finite-only interpolant.
    """
    fin = np.isfinite(values)
    filled = np.where(fin, values, 0.0)
    lin = RegularGridInterpolator(axes, filled, method="linear", bounds_error=False, fill_value=np.nan)
    w = RegularGridInterpolator(axes, fin.astype(float), method="linear", bounds_error=False, fill_value=np.nan)
    near = RegularGridInterpolator(axes, np.where(np.isnan(values), 0.0, values), method="nearest",
                                   bounds_error=False, fill_value=np.nan)
    v = lin(pts)
    wt = w(pts)
    nv = near(pts)
    out = np.where(wt > 1.0 - 1e-12, v, np.nan)
    partial = (wt <= 1.0 - 1e-12) & (wt > 0)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(partial & np.isfinite(nv), v / wt, out)
    out = np.where(~np.isfinite(nv) & ~np.isnan(nv), nv, out)
    out = np.where(wt == 0, nv, out)
    return out


def rescale(obj, eps: float, ref_axes=None, n: int = 65):
    """eps-rescaling of a PhiField or a LevelGraph onto a fixed reference window.

    PhiField:   values eps Phi(x/eps) at time eps t.
    LevelGraph: heights eps h(x/eps).
    """
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must lie in (0, 1]")
    if isinstance(obj, PhiField):
        ref = ref_axes if ref_axes is not None else reference_axes(obj.dim, n)
        _check_cover(obj.axes, ref, eps)
        mesh = np.meshgrid(*ref, indexing="ij")
        pts = np.stack([m.ravel() / eps for m in mesh], axis=-1)
        vals = _sample_extended(obj.axes, obj.values, pts).reshape(mesh[0].shape)
        return PhiField(tuple(ref), eps * obj.time, eps * vals, obj.clamp_lo, obj.clamp_hi, obj.eps * eps)
    if isinstance(obj, LevelGraph):
        ref = ref_axes if ref_axes is not None else reference_axes(obj.dim, n)
        _check_cover(obj.axes, ref, eps)
        mesh = np.meshgrid(*ref, indexing="ij")
        pts = np.stack([m.ravel() / eps for m in mesh], axis=-1)
        h = np.where(obj.valid, obj.heights, 0.0)
        lin = RegularGridInterpolator(obj.axes, h, bounds_error=False, fill_value=np.nan)
        w = RegularGridInterpolator(obj.axes, obj.valid.astype(float), bounds_error=False, fill_value=0.0)
        ok = (w(pts) > 1.0 - 1e-12).reshape(mesh[0].shape)
        hv = eps * lin(pts).reshape(mesh[0].shape)
        return LevelGraph(obj.orientation, tuple(ref), np.where(ok, hv, np.nan), obj.lam, ok)
    raise TypeError(f"cannot rescale {type(obj).__name__}")


# -- convergence -------------------------------------------------------------------------------

@dataclass
class ConvergenceReport:
    eps: list[float]
    sup_diffs: list[float]
    factors: list[float]
    lipschitz: list[float]
    overlap_counts: list[int]

    @property
    def cauchy(self) -> bool:
        """Consecutive differences strictly decrease (zero differences count as converged)."""
        d = self.sup_diffs
        return all(b < a or (a == 0.0 and b == 0.0) for a, b in zip(d, d[1:]))

    @property
    def lipschitz_ratio(self) -> float:
        lo = min(self.lipschitz)
        return max(self.lipschitz) / lo if lo > 0 else (1.0 if max(self.lipschitz) == 0 else math.inf)

    def to_dict(self) -> dict:
        return {"eps": self.eps, "sup_diffs": self.sup_diffs, "factors": self.factors,
                "lipschitz": self.lipschitz, "overlap_counts": self.overlap_counts,
                "cauchy": self.cauchy, "lipschitz_ratio": self.lipschitz_ratio}


def _values_and_mask(obj):
    if isinstance(obj, LevelGraph):
        return obj.heights, obj.valid
    return obj.values, np.isfinite(obj.values)


def _lipschitz_of(obj) -> float:
    if isinstance(obj, LevelGraph):
        return lipschitz_estimate(obj).global_L
    v = obj.values
    g2 = np.zeros(v.shape)
    best = 0.0
    for k, a in enumerate(obj.axes):
        d = np.diff(v, axis=k) / (a[1] - a[0])
        d = np.where(np.isfinite(d), np.abs(d), 0.0)
        best = max(best, float(d.max(initial=0.0)))
    return best


def convergence_diagnostic(sequence, eps=None) -> ConvergenceReport:
    """Sup differences between consecutive rescaled levels on their common finite region."""
    seq = list(sequence)
    if len(seq) < 3:
        raise BlowdownError("need at least three eps levels")
    eps = list(eps) if eps is not None else [getattr(s, "eps", math.nan) for s in seq]
    shape = _values_and_mask(seq[0])[0].shape
    diffs, counts = [], []
    for a, b in zip(seq, seq[1:]):
        va, ma = _values_and_mask(a)
        vb, mb = _values_and_mask(b)
        if va.shape != shape or vb.shape != shape:
            raise BlowdownError("levels must share the reference window")
        both = ma & mb
        if not both.any():
            raise BlowdownError("empty finite overlap between consecutive levels")
        diffs.append(float(np.max(np.abs(va[both] - vb[both]))))
        counts.append(int(both.sum()))
    factors = [b / a if a > 0 else (0.0 if b == 0 else math.inf) for a, b in zip(diffs, diffs[1:])]
    lips = [_lipschitz_of(s) for s in seq]
    return ConvergenceReport(eps, diffs, factors, lips, counts)


# -- comparison with the Hopf-Lax limit -------------------------------------------------------

@dataclass
class HJComparison:
    sup_plus: float
    mean_plus: float
    sup_minus: float
    mean_minus: float
    n_plus: int
    n_minus: int
    coverage_plus: float
    coverage_minus: float
    value_range: float
    errors: list[str] = field(default_factory=list)

    @property
    def relative_sup_plus(self) -> float:
        return self.sup_plus / self.value_range if self.value_range > 0 else math.inf

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in ("sup_plus", "mean_plus", "sup_minus", "mean_minus", "n_plus",
                                           "n_minus", "coverage_plus", "coverage_minus", "value_range")}
        d["relative_sup_plus"] = self.relative_sup_plus
        d["n_errors"] = len(self.errors)
        return d


def compare_to_hj(phi: PhiField, boundary, params: HJParams, max_points: int = 400,
                  backward: bool = True) -> HJComparison:
    """Compare finite Phi samples with the Hopf-Lax forward (Phi > 0) and backward (Phi < 0) values.

    ``boundary`` is a BoundaryGraph or a LevelGraph (wrapped as Sampled).
    At most ``max_points`` samples per side, taken with a uniform stride.
    """
    if isinstance(boundary, LevelGraph):
        boundary = Sampled(boundary)
    mesh = phi.mesh()
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    vals = phi.values.ravel()
    t = phi.time
    fin = np.isfinite(vals)
    errs: list[str] = []
    out = {}
    for side, sel, fn in ((1, fin & (vals > 0), hopf_lax_forward), (-1, fin & (vals < 0), hopf_lax_backward)):
        idx = np.nonzero(sel)[0]
        if side == -1 and not backward:
            idx = idx[:0]
        stride = max(1, int(math.ceil(idx.size / max_points)))
        idx = idx[::stride]
        d = []
        for i in idx:
            try:
                r = fn(pts[i], t, boundary, params)
            except HJError as exc:
                errs.append(f"{pts[i].tolist()}: {exc}")
                continue
            d.append(abs(r.value - vals[i]))
        d = np.asarray(d)
        cov = d.size / idx.size if idx.size else 0.0
        out[side] = (float(d.max()) if d.size else math.nan, float(d.mean()) if d.size else math.nan,
                     int(d.size), cov)
    plus_vals = vals[fin & (vals > 0)]
    vrange = float(plus_vals.max() - plus_vals.min()) if plus_vals.size else 0.0
    return HJComparison(out[1][0], out[1][1], out[-1][0], out[-1][1], out[1][2], out[-1][2],
                        out[1][3], out[-1][3], vrange, errs)


# -- further diagnostics ------------------------------------------------------------------------

def semiconcavity_constant(phi: PhiField) -> float:
    """max over the finite band with Phi > 0 of Phi times the top Hessian eigenvalue."""
    v = phi.values
    dim = phi.dim
    h = [a[1] - a[0] for a in phi.axes]
    inner = tuple(slice(1, -1) for _ in range(dim))
    H = np.zeros(tuple(s - 2 for s in v.shape) + (dim, dim))
    for i in range(dim):
        for j in range(dim):
            if i == j:
                hi = [slice(1, -1)] * dim
                lo = [slice(1, -1)] * dim
                hi[i], lo[i] = slice(2, None), slice(None, -2)
                H[..., i, i] = (v[tuple(hi)] - 2 * v[inner] + v[tuple(lo)]) / h[i] ** 2
            elif j > i:
                def sh(si, sj):
                    s = [slice(1, -1)] * dim
                    s[i] = slice(2, None) if si > 0 else slice(None, -2)
                    s[j] = slice(2, None) if sj > 0 else slice(None, -2)
                    return v[tuple(s)]
                H[..., i, j] = H[..., j, i] = (sh(1, 1) - sh(1, -1) - sh(-1, 1) + sh(-1, -1)) / (4 * h[i] * h[j])
    ok = np.all(np.isfinite(H.reshape(H.shape[:-2] + (-1,))), axis=-1) & np.isfinite(v[inner]) & (v[inner] > 0)
    if not ok.any():
        return math.nan
    lam = np.linalg.eigvalsh(H[ok])[:, -1]
    return float(np.max(lam * v[inner][ok]))


@dataclass
class TailFit:
    slope: float
    intercept: float
    r2: float
    n: int


def tail_decay_fit(field: Field, graph: LevelGraph, u_range=(1e-10, 1e-2)) -> TailFit:
    """Least-squares line of log u against t - h(x) on the not-yet-invaded side."""
    if graph.axes[0].shape != field.grid.axis(0).shape:
        raise BlowdownError("graph and field must share the grid")
    u = field.values
    sel = graph.valid & (u >= u_range[0]) & (u <= u_range[1]) & (graph.heights > field.time)
    if sel.sum() < 3:
        raise BlowdownError("too few tail samples")
    s = field.time - graph.heights[sel]
    y = np.log(u[sel])
    A = np.vstack([s, np.ones_like(s)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    pred = A @ coef
    ss = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum((y - pred) ** 2)) / ss if ss > 0 else 1.0
    return TailFit(float(coef[0]), float(coef[1]), r2, int(sel.sum()))


def scale_invariance_defect(obj, a: float, b: float, n: int = 65) -> float:
    """sup |rescale(rescale(obj, a), b) - rescale(obj, a b)| on the common finite set."""
    dim = obj.dim
    inner = reference_axes(dim, 2 * n - 1, 1.0 / b)
    two = rescale(rescale(obj, a, ref_axes=inner), b, n=n)
    one = rescale(obj, a * b, n=n)
    v2, m2 = _values_and_mask(two)
    v1, m1 = _values_and_mask(one)
    both = m1 & m2
    if not both.any():
        raise BlowdownError("empty overlap")
    return float(np.max(np.abs(v2[both] - v1[both])))
