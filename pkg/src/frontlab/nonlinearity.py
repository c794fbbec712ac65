"""Reaction terms f(u) on [0, 1] and their structural checks.

Three kinds are supported:

* ``bistable_cubic``: f(u) = u (u - theta) (1 - u), 0 < theta < 1/2
* ``combustion``: f = 0 on [0, theta], f = (u - theta)(1 - u) on (theta, 1]
* ``tabulated``: monotone-cubic interpolation of sampled (u, f(u)) pairs

All evaluators accept scalars or numpy arrays and return exact zeros at
u = 0 and u = 1.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator


class NonlinearityError(ValueError):
    """Base class for reaction-term errors."""


class DomainError(NonlinearityError):
    """Raised when f is evaluated outside [0, 1]."""


class InvalidSpecError(NonlinearityError):
    """Raised for inadmissible reaction terms."""


class OneSidedDerivativeError(NonlinearityError):
    """f' is discontinuous at the ignition point; both one-sided values are attached."""

    def __init__(self, u: float, left: float, right: float):
        super().__init__(f"f' is discontinuous at u={u}: left={left}, right={right}")
        self.u = u
        self.left = left
        self.right = right


class Kind(str, Enum):
    BISTABLE_CUBIC = "bistable_cubic"
    COMBUSTION = "combustion"
    TABULATED = "tabulated"


def _default_hump(u, theta):
    return (u - theta) * (1.0 - u)


def _default_hump_prime(u, theta):
    return 1.0 + theta - 2.0 * u


@dataclass(frozen=True)
class NonlinearitySpec:
    """Immutable description of the reaction term.

    Use the constructors :meth:`bistable_cubic`, :meth:`combustion` and
    :meth:`tabulated` rather than instantiating directly.
    """

    kind: Kind
    theta: float
    table_u: np.ndarray | None = field(default=None, repr=False, compare=False)
    table_f: np.ndarray | None = field(default=None, repr=False, compare=False)
    table_file: str | None = None
    hump: Callable | None = field(default=None, repr=False, compare=False)
    _interp: PchipInterpolator | None = field(default=None, repr=False, compare=False)

    # -- constructors -----------------------------------------------------

    @classmethod
    def bistable_cubic(cls, theta: float, strict: bool = True) -> "NonlinearitySpec":
        """u (u - theta)(1 - u).

        ``strict=False`` admits theta in [1/2, 1) so that failing hypothesis
        reports can be produced; such specs have no invading front.
        """
        hi = 0.5 if strict else 1.0
        if not 0.0 < theta < hi:
            raise InvalidSpecError(f"bistable cubic needs 0 < theta < {hi}, got {theta}")
        return cls(Kind.BISTABLE_CUBIC, float(theta))

    @classmethod
    def combustion(cls, theta: float, hump: Callable | None = None) -> "NonlinearitySpec":
        """Ignition-type term; ``hump(u, theta)`` must be positive on (theta, 1) and vanish at 1."""
        if not 0.0 < theta < 1.0:
            raise InvalidSpecError(f"combustion needs 0 < theta < 1, got {theta}")
        return cls(Kind.COMBUSTION, float(theta), hump=hump)

    @classmethod
    def tabulated(cls, u, f, theta: float | None = None, table_file: str | None = None) -> "NonlinearitySpec":
        u = np.asarray(u, dtype=float)
        f = np.asarray(f, dtype=float)
        if u.ndim != 1 or u.shape != f.shape or u.size < 4:
            raise InvalidSpecError("table needs at least 4 matching (u, f) samples")
        if not np.all(np.diff(u) > 0):
            raise InvalidSpecError("table u grid must be strictly increasing")
        if u[0] != 0.0 or u[-1] != 1.0:
            raise InvalidSpecError("table u grid must start at 0 and end at 1")
        if theta is None:
            theta = _infer_theta(u, f)
        return cls(Kind.TABULATED, float(theta), table_u=u, table_f=f,
                   table_file=table_file, _interp=PchipInterpolator(u, f))

    @classmethod
    def from_csv(cls, path: str | Path, theta: float | None = None) -> "NonlinearitySpec":
        rows = []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    continue  # header line
        if not rows:
            raise InvalidSpecError(f"no numeric (u, f) rows in {path}")
        data = np.array(rows)
        return cls.tabulated(data[:, 0], data[:, 1], theta=theta, table_file=str(path))

    # -- config block -----------------------------------------------------

    def to_config(self) -> dict[str, str]:
        if self.kind is Kind.TABULATED:
            out = {"kind": self.kind.value, "table_file": str(self.table_file)}
            out["theta"] = repr(self.theta)
            return out
        return {"kind": self.kind.value, "theta": repr(self.theta)}

    @classmethod
    def from_config(cls, block: dict[str, str], base_dir: str | Path | None = None) -> "NonlinearitySpec":
        kind = block.get("kind")
        if kind == Kind.BISTABLE_CUBIC.value:
            return cls.bistable_cubic(float(block["theta"]))
        if kind == Kind.COMBUSTION.value:
            return cls.combustion(float(block["theta"]))
        if kind == Kind.TABULATED.value:
            path = Path(block["table_file"])
            if base_dir is not None and not path.is_absolute():
                path = Path(base_dir) / path
            theta = float(block["theta"]) if "theta" in block else None
            return cls.from_csv(path, theta=theta)
        raise InvalidSpecError(f"unknown nonlinearity kind {kind!r}")

    # -- evaluation -------------------------------------------------------

    def __call__(self, u):
        return evaluate(self, u)

    @property
    def lipschitz(self) -> float:
        """Lipschitz constant of f on [0, 1] (used for the time-step bound)."""
        if self.kind is Kind.BISTABLE_CUBIC:
            th = self.theta
            cands = [th, 1.0 - th, abs((1.0 + th) ** 2 / 3.0 - th)]
            return max(cands)
        if self.kind is Kind.COMBUSTION and self.hump is None:
            return 1.0 - self.theta
        s = np.linspace(0.0, 1.0, 20001)
        vals = evaluate(self, s)
        return float(np.max(np.abs(np.diff(vals)) / np.diff(s)))


def _infer_theta(u: np.ndarray, f: np.ndarray) -> float:
    """Largest u below which f is non-positive (the ignition / balance point)."""
    pos = np.nonzero(f[:-1] > 0)[0]
    if pos.size == 0:
        raise InvalidSpecError("tabulated f is never positive")
    i = pos[0]
    if i == 0:
        return float(u[0])
    # linear root between the last non-positive and first positive samples
    u0, u1, f0, f1 = u[i - 1], u[i], f[i - 1], f[i]
    return float(u0 + (0.0 - f0) * (u1 - u0) / (f1 - f0)) if f1 != f0 else float(u1)


def _check_domain(u):
    arr = np.asarray(u, dtype=float)
    if arr.size and (np.nanmin(arr) < 0.0 or np.nanmax(arr) > 1.0):
        raise DomainError(f"u must lie in [0, 1]; got range [{np.min(arr)}, {np.max(arr)}]")
    if np.isnan(arr).any():
        raise DomainError("u contains NaN")
    return arr


def evaluate(spec: NonlinearitySpec, u, check: bool = True):
    """f(u) with exact zeros at the endpoints.

    ``check=False`` skips the domain scan; callers must guarantee 0 <= u <= 1.
    """
    arr = _check_domain(u) if check else np.asarray(u, dtype=float)
    th = spec.theta
    if spec.kind is Kind.BISTABLE_CUBIC:
        out = arr * (arr - th) * (1.0 - arr)
    elif spec.kind is Kind.COMBUSTION:
        hump = spec.hump or _default_hump
        out = np.where(arr > th, hump(arr, th), 0.0)
    else:
        out = spec._interp(arr)
        out = np.where((arr == 0.0) | (arr == 1.0), 0.0, out)
    if np.ndim(u) == 0:
        return float(out)
    return out


def evaluate_derivative(spec: NonlinearitySpec, u, h: float = 1e-6):
    """f'(u); one-sided difference at the ends, centered difference for tables."""
    arr = _check_domain(u)
    th = spec.theta
    if spec.kind is Kind.BISTABLE_CUBIC:
        out = -3.0 * arr**2 + 2.0 * (1.0 + th) * arr - th
    elif spec.kind is Kind.COMBUSTION:
        if np.any(arr == th):
            if spec.hump is None:
                right = _default_hump_prime(th, th)
            else:
                right = (spec.hump(th + h, th) - spec.hump(th, th)) / h
            raise OneSidedDerivativeError(th, 0.0, float(right))
        if spec.hump is None:
            inner = _default_hump_prime(arr, th)
        else:
            inner = _centered(lambda s: spec.hump(s, th), arr, h)
        out = np.where(arr > th, inner, 0.0)
    else:
        out = _centered(lambda s: evaluate(spec, s), arr, h)
    if np.ndim(u) == 0:
        return float(out)
    return out


def _centered(fun, arr, h):
    lo = np.clip(arr - h, 0.0, 1.0)
    hi = np.clip(arr + h, 0.0, 1.0)
    return (fun(hi) - fun(lo)) / (hi - lo)


def integral(spec: NonlinearitySpec) -> float:
    """Adaptive quadrature of f over [0, 1]."""
    points = [spec.theta] if 0.0 < spec.theta < 1.0 else None
    if spec.kind is Kind.TABULATED:
        return float(spec._interp.integrate(0.0, 1.0))
    val, _ = quad(lambda s: evaluate(spec, s), 0.0, 1.0, points=points,
                  epsabs=1e-13, epsrel=1e-12, limit=200)
    return float(val)


@dataclass
class HypothesisReport:
    f3_integral: float
    f_prime_0: float
    f_prime_1: float
    passes: dict[str, bool]
    notes: list[str] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(self.passes.values())


def check_hypotheses(spec: NonlinearitySpec, n_grid: int = 10_000) -> HypothesisReport:
    """Check the structural conditions F1-F4 on a uniform grid.

    F1: f(0) = f(1) = 0 and f finite/Lipschitz on the grid.
    F2: f'(1) < 0.  F3: the integral of f over [0, 1] is positive.
    F4: f > 0 on (theta, 1) and either f < 0 on (0, theta) with f'(0) < 0,
    or f = 0 on (0, theta).
    """
    notes: list[str] = []
    if spec.kind is Kind.TABULATED:
        f0, f1 = spec.table_f[0], spec.table_f[-1]
        if f0 != 0.0 or f1 != 0.0:
            raise InvalidSpecError(f"tabulated f must vanish at 0 and 1, got f(0)={f0}, f(1)={f1}")
    u = np.linspace(0.0, 1.0, n_grid + 1)
    f = evaluate(spec, u)
    f1_ok = bool(np.all(np.isfinite(f)) and f[0] == 0.0 and f[-1] == 0.0)

    fp0 = evaluate_derivative(spec, 0.0)
    fp1 = evaluate_derivative(spec, 1.0)
    I = integral(spec)

    th = spec.theta
    inner = (u > 0.0) & (u < 1.0)
    above = inner & (u > th)
    below = inner & (u < th)
    positive_above = bool(np.all(f[above] > 0.0))
    if np.all(f[below] == 0.0):
        f4_ok = positive_above
        notes.append("ignition (combustion) sign pattern")
    else:
        f4_ok = positive_above and bool(np.all(f[below] < 0.0)) and fp0 < 0.0
        notes.append("bistable sign pattern")
    if not f4_ok:
        notes.append("F4 sign pattern violated")
    passes = {"F1": f1_ok, "F2": fp1 < 0.0, "F3": I > 0.0, "F4": f4_ok}
    return HypothesisReport(f3_integral=I, f_prime_0=float(fp0), f_prime_1=float(fp1),
                            passes=passes, notes=notes)
