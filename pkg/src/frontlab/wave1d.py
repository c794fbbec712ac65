"""One-dimensional travelling wave: speed, profile and tail exponents.

The profile solves ``-g'' + kappa g' = f(g)`` with g(-inf) = 0, g(+inf) = 1.
Writing q = g' as a function of u = g gives the phase-plane reduction
``q dq/du = kappa q - f(u)``; the wave is the unique kappa for which the
branch leaving (0, 0) lands on the saddle (1, 0).

The shot is integrated in the (u, q) plane parameterised by the travelling
coordinate, i.e. ``u' = q, q' = kappa q - f(u)``.  That is the same phase
curve as dq/du but stays regular where q -> 0.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq
from scipy.interpolate import CubicHermiteSpline, PchipInterpolator

from .nonlinearity import (
    DomainError,
    InvalidSpecError,
    Kind,
    NonlinearitySpec,
    evaluate,
    evaluate_derivative,
)

LAUNCH_U0 = 1e-8
# Miss distance at the saddle scales like |kappa - kappa*|**(b/(2b + kappa)),
# roughly the 0.4 power for the cubic, so 1e-3 means |dkappa| below ~1e-7.
CONNECT_TOL = 1e-3
RTOL = 1e-10
ATOL = 1e-14
T_MAX = 1e4


class WaveError(RuntimeError):
    pass


class Outcome(str, Enum):
    OVERSHOOT = "overshoot"
    UNDERSHOOT = "undershoot"
    CONNECTED = "connected"


@dataclass
class ShootResult:
    kappa: float
    outcome: Outcome
    q_at_1: float | None
    first_zero_u: float | None
    trajectory: np.ndarray = field(repr=False)

    @property
    def surrogate(self) -> float:
        """Signed miss distance: q(1) when the branch reaches u = 1, else -(1 - u_turn)."""
        if self.q_at_1 is not None:
            return self.q_at_1
        if self.first_zero_u is not None:
            return -(1.0 - self.first_zero_u)
        return 0.0


def _scalar_f(spec: NonlinearitySpec):
    """Fast scalar f for the ODE right-hand side; clips stage values into [0, 1]."""
    th = spec.theta
    if spec.kind is Kind.BISTABLE_CUBIC:
        def f(u):
            u = min(max(u, 0.0), 1.0)
            return u * (u - th) * (1.0 - u)
    elif spec.kind is Kind.COMBUSTION and spec.hump is None:
        def f(u):
            u = min(max(u, 0.0), 1.0)
            return (u - th) * (1.0 - u) if u > th else 0.0
    else:
        def f(u):
            return float(evaluate(spec, min(max(u, 0.0), 1.0)))
    return f


def tail_rates(spec: NonlinearitySpec, kappa: float) -> tuple[float, float]:
    """(beta_minus, beta_plus): exponential rates of g at -inf and +inf."""
    if kappa <= 0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    fp0 = evaluate_derivative(spec, 0.0)
    fp1 = evaluate_derivative(spec, 1.0)
    beta_plus = (-kappa + math.sqrt(kappa * kappa - 4.0 * fp1)) / 2.0
    beta_minus = (kappa + math.sqrt(kappa * kappa - 4.0 * fp0)) / 2.0
    return beta_minus, beta_plus


def _launch(spec: NonlinearitySpec, kappa: float) -> tuple[float, float]:
    if spec.kind is Kind.COMBUSTION:
        # q = kappa u solves the reduction exactly where f vanishes
        return spec.theta, kappa * spec.theta
    beta_minus, _ = tail_rates(spec, kappa)
    return LAUNCH_U0, beta_minus * LAUNCH_U0


def shoot(spec: NonlinearitySpec, kappa: float, tol: float = CONNECT_TOL,
          rtol: float = RTOL, method: str = "RK45") -> ShootResult:
    """Integrate the branch leaving u = 0 and classify where it ends."""
    if not kappa > 0:
        raise DomainError(f"kappa must be positive, got {kappa}")
    f = _scalar_f(spec)

    def rhs(_, y):
        return (y[1], kappa * y[1] - f(y[0]))

    def reach_one(_, y):
        return y[0] - 1.0
    reach_one.terminal = True
    reach_one.direction = 1

    def turn(_, y):
        return y[1]
    turn.terminal = True
    turn.direction = -1

    u0, q0 = _launch(spec, kappa)
    sol = solve_ivp(rhs, (0.0, T_MAX), (u0, q0), method=method, rtol=rtol, atol=ATOL,
                    events=(reach_one, turn))
    if sol.status == -1:
        last = sol.y[:, -1]
        raise WaveError(f"integration failed at kappa={kappa}: last (u, q)=({last[0]}, {last[1]}); {sol.message}")
    traj = sol.y.T.copy()
    if sol.t_events[0].size:
        q1 = float(sol.y_events[0][0][1])
        outcome = Outcome.CONNECTED if q1 <= tol else Outcome.OVERSHOOT
        return ShootResult(kappa, outcome, q1, None, traj)
    if sol.t_events[1].size:
        uz = float(sol.y_events[1][0][0])
        outcome = Outcome.CONNECTED if 1.0 - uz <= tol else Outcome.UNDERSHOOT
        return ShootResult(kappa, outcome, None, uz, traj)
    # parked on the saddle for the whole horizon
    return ShootResult(kappa, Outcome.CONNECTED, float(traj[-1, 1]), None, traj)


def minimal_speed(spec: NonlinearitySpec, tol: float = 1e-10) -> float:
    """Root of the signed shooting miss between an undershooting and an overshooting speed."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    k = 1.0
    r = shoot(spec, k)
    if r.outcome is Outcome.CONNECTED:
        return k
    if r.outcome is Outcome.OVERSHOOT:
        hi = k
        while True:
            k /= 2.0
            if k < 1e-6:
                raise InvalidSpecError("no undershooting speed above 1e-6; no invading wave")
            r = shoot(spec, k)
            if r.outcome is not Outcome.OVERSHOOT:
                lo = k
                break
            hi = k
    else:
        lo = k
        while True:
            k *= 2.0
            if k > 1e3:
                raise InvalidSpecError("no overshooting speed below 1e3")
            r = shoot(spec, k)
            if r.outcome is not Outcome.UNDERSHOOT:
                hi = k
                break
            lo = k
    if hi - lo < tol:
        return 0.5 * (lo + hi)

    def linearised(kappa):
        # the miss behaves like |kappa - kappa*|**p near the root; undo the power
        v = shoot(spec, kappa).surrogate
        bp = tail_rates(spec, kappa)[1]
        p = bp / (2.0 * bp + kappa)
        return math.copysign(abs(v) ** (1.0 / p), v)

    # Brent keeps a sign-changing bracket, falling back to bisection steps
    return float(brentq(linearised, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps))


@dataclass
class WaveProfile:
    """Sampled wave profile normalised so that g(0) = 1/2."""

    kappa_star: float
    t_grid: np.ndarray = field(repr=False)
    g_values: np.ndarray = field(repr=False)
    g_prime: np.ndarray = field(repr=False)
    beta_minus: float
    beta_plus: float
    alpha_minus: float
    alpha_plus: float
    beta_minus_fit: float = math.nan
    beta_plus_fit: float = math.nan
    residual: float = math.nan
    covered: tuple[float, float] = (-math.inf, math.inf)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self._spline = CubicHermiteSpline(self.t_grid, self.g_values, self.g_prime)
        lo, hi = self.covered
        m = (self.t_grid >= lo) & (self.t_grid <= hi)
        g = self.g_values[m]
        self._inv = PchipInterpolator(np.log(g) - np.log1p(-g), self.t_grid[m])
        self._g_lo, self._g_hi = float(g[0]), float(g[-1])

    def __call__(self, t):
        """g(t) with exponential tails outside the resolved range."""
        t = np.asarray(t, dtype=float)
        lo, hi = self.covered
        out = np.empty_like(t)
        left = t < lo
        right = t > hi
        mid = ~(left | right)
        out[mid] = self._spline(t[mid])
        out[left] = self.alpha_minus * np.exp(self.beta_minus * t[left])
        out[right] = -np.expm1(np.log(self.alpha_plus) - self.beta_plus * t[right])
        return out if out.ndim else float(out)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.covered
        out = np.empty_like(t)
        left = t < lo
        right = t > hi
        mid = ~(left | right)
        out[mid] = self._spline(t[mid], 1)
        out[left] = self.beta_minus * self.alpha_minus * np.exp(self.beta_minus * t[left])
        out[right] = self.beta_plus * self.alpha_plus * np.exp(-self.beta_plus * t[right])
        return out if out.ndim else float(out)

    def to_json(self) -> str:
        d = {k: v for k, v in asdict(self).items() if k not in ("t_grid", "g_values", "g_prime")}
        d["covered"] = list(self.covered)
        return json.dumps(d, indent=2, default=float)


def profile_inverse(profile: WaveProfile, u):
    """t with g(t) = u; interpolation in logit(u), exponential tails outside the samples."""
    arr = np.asarray(u, dtype=float)
    if np.any(~((arr > 0.0) & (arr < 1.0))):
        raise DomainError("profile_inverse needs 0 < u < 1")
    out = np.empty_like(arr)
    lo = arr < profile._g_lo
    hi = arr > profile._g_hi
    mid = ~(lo | hi)
    out[mid] = profile._inv(np.log(arr[mid]) - np.log1p(-arr[mid]))
    out[lo] = (np.log(arr[lo]) - math.log(profile.alpha_minus)) / profile.beta_minus
    out[hi] = (math.log(profile.alpha_plus) - np.log1p(-arr[hi])) / profile.beta_plus
    return out if out.ndim else float(out)


def _branch_from_zero(spec, kappa, f):
    """Unstable manifold of (0, 0) up to u = 1/2; returns (dense sol, time at u = 1/2, t_start)."""
    def rhs(_, y):
        return (y[1], kappa * y[1] - f(y[0]))

    def half(_, y):
        return y[0] - 0.5
    half.terminal = True
    half.direction = 1
    u0, q0 = _launch(spec, kappa)
    sol = solve_ivp(rhs, (0.0, T_MAX), (u0, q0), rtol=RTOL, atol=ATOL,
                    events=half, dense_output=True)
    if not sol.t_events[0].size:
        raise WaveError("branch from 0 never reached u = 1/2 (not connected)")
    return sol, float(sol.t_events[0][0])


def _branch_from_one(spec, kappa, beta_plus, f, delta=1e-8):
    """Stable manifold of (1, 0), integrated backwards until u = 1/2."""
    def rhs(_, y):
        return (y[1], kappa * y[1] - f(y[0]))

    def half(_, y):
        return y[0] - 0.5
    half.terminal = True
    sol = solve_ivp(rhs, (0.0, -T_MAX), (1.0 - delta, beta_plus * delta), rtol=RTOL, atol=ATOL,
                    events=half, dense_output=True)
    if not sol.t_events[0].size:
        raise WaveError("branch from 1 never reached u = 1/2")
    return sol, float(sol.t_events[0][0])


def _loglin_fit(t, y):
    slope, intercept = np.polyfit(t, y, 1)
    return float(slope), float(intercept)


def reconstruct_profile(spec: NonlinearitySpec, kappa_star: float, t_grid=None,
                        fit_fraction: float = 0.2, match_tol: float = 1e-6) -> WaveProfile:
    """Sample g on ``t_grid`` (default: [-20, 20] with step 0.01).

    The negative half follows the unstable manifold of 0, the positive half
    the stable manifold of 1, both anchored where they cross u = 1/2.  The
    two branches must agree there (slope mismatch < ``match_tol``); otherwise
    ``kappa_star`` is not the connecting speed.
    """
    if t_grid is None:
        t_grid = np.round(np.arange(-2000, 2001) * 0.01, 12)
    t_grid = np.asarray(t_grid, dtype=float)
    if not np.all(np.diff(t_grid) > 0):
        raise ValueError("t_grid must be increasing")
    f = _scalar_f(spec)
    beta_minus, beta_plus = tail_rates(spec, kappa_star)
    sol_a, ta = _branch_from_zero(spec, kappa_star, f)
    sol_b, tb = _branch_from_one(spec, kappa_star, beta_plus, f)
    qa = float(sol_a.sol(ta)[1])
    qb = float(sol_b.sol(tb)[1])
    if abs(qa - qb) > match_tol:
        raise WaveError(f"branches do not connect at u=1/2 (q={qa} vs {qb}); kappa not the wave speed")

    # branch A covers t in [-ta, 0], branch B covers [0, -tb]
    lo_cov, hi_cov = -ta, -tb
    g = np.empty_like(t_grid)
    gp = np.empty_like(t_grid)
    neg = (t_grid <= 0) & (t_grid >= lo_cov)
    pos = (t_grid > 0) & (t_grid <= hi_cov)
    ya = sol_a.sol(t_grid[neg] + ta)
    yb = sol_b.sol(t_grid[pos] + tb)
    g[neg], gp[neg] = ya
    g[pos], gp[pos] = yb
    if spec.kind is Kind.COMBUSTION:
        # below the ignition point the profile is exactly theta * exp(kappa (t - t_theta))
        below = t_grid < lo_cov
        g[below] = spec.theta * np.exp(kappa_star * (t_grid[below] + ta))
        gp[below] = kappa_star * g[below]
        neg |= below
        lo_cov = -math.inf
    cov = neg | pos

    # tail amplitudes on the outer fraction of each resolved half
    tc = t_grid[cov]
    gc = g[cov]
    left_win = tc <= tc[0] * (1.0 - fit_fraction)
    right_win = tc >= tc[-1] * (1.0 - fit_fraction)
    log_lo = np.log(gc[left_win])
    log_hi = np.log1p(-gc[right_win])
    bm_fit, _ = _loglin_fit(tc[left_win], log_lo)
    bp_fit, _ = _loglin_fit(tc[right_win], log_hi)
    alpha_minus = float(np.exp(np.mean(log_lo - beta_minus * tc[left_win])))
    alpha_plus = float(np.exp(np.mean(log_hi + beta_plus * tc[right_win])))

    # tails outside the resolved range
    left = t_grid < lo_cov
    right = t_grid > hi_cov
    g[left] = alpha_minus * np.exp(beta_minus * t_grid[left])
    gp[left] = beta_minus * g[left]
    g[right] = -np.expm1(math.log(alpha_plus) - beta_plus * t_grid[right])
    gp[right] = beta_plus * (1.0 - g[right])

    if not np.all(np.diff(g) > 0):
        raise WaveError("reconstructed profile is not strictly increasing")

    # discrete ODE residual on resolved interior nodes
    idx = np.nonzero(cov)[0]
    idx = idx[(idx > 0) & (idx < t_grid.size - 1)]
    idx = idx[cov[idx - 1] & cov[idx + 1]]
    if spec.kind is Kind.COMBUSTION:
        # third derivative jumps at the ignition point; skip stencils straddling it
        kink = -ta
        idx = idx[(t_grid[idx + 1] < kink) | (t_grid[idx - 1] > kink)]
    h1 = t_grid[idx] - t_grid[idx - 1]
    h2 = t_grid[idx + 1] - t_grid[idx]
    d2 = 2.0 * (h1 * g[idx + 1] - (h1 + h2) * g[idx] + h2 * g[idx - 1]) / (h1 * h2 * (h1 + h2))
    d1 = (g[idx + 1] - g[idx - 1]) / (h1 + h2)
    res = -d2 + kappa_star * d1 - evaluate(spec, g[idx])
    residual = float(np.max(np.abs(res))) if idx.size else math.nan

    return WaveProfile(
        kappa_star=float(kappa_star), t_grid=t_grid, g_values=g, g_prime=gp,
        beta_minus=beta_minus, beta_plus=beta_plus,
        alpha_minus=alpha_minus, alpha_plus=alpha_plus,
        beta_minus_fit=bm_fit, beta_plus_fit=-bp_fit, residual=residual,
        covered=(max(lo_cov, float(t_grid[0])), min(hi_cov, float(t_grid[-1]))),
        metadata={"fit_fraction": fit_fraction, "fit_window": "outer fraction of each resolved tail",
                  "branch_mismatch_q": abs(qa - qb)},
    )


def compute_wave(spec: NonlinearitySpec, tol: float = 1e-10, t_grid=None) -> WaveProfile:
    """minimal_speed followed by reconstruct_profile."""
    return reconstruct_profile(spec, minimal_speed(spec, tol), t_grid)


def g_ratio(profile: WaveProfile, spec: NonlinearitySpec, t):
    """g''/g' along the profile, from the wave equation g'' = kappa g' - f(g)."""
    g = np.clip(profile(t), 0.0, 1.0)
    gp = profile.derivative(t)
    return (profile.kappa_star * gp - evaluate(spec, g)) / gp
