import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from frontlab.nonlinearity import NonlinearitySpec, evaluate
from frontlab.wave1d import (Outcome, compute_wave, g_ratio, minimal_speed, profile_inverse, shoot,
                             tail_rates)

from conftest import logistic

# independent oracle: q = g' as a function of u, integrated backward from u = 1
# with LSODA and matched to q = kappa theta at the ignition point (brentq);
# value frozen from that computation
COMBUSTION_03_KAPPA = 0.4953702072467028


def _combustion_oracle(theta):
    f = lambda u: (u - theta) * (1 - u) if u > theta else 0.0

    def miss(k):
        bp = (-k + math.sqrt(k * k + 4 * (1 - theta))) / 2
        d = 1e-7
        sol = solve_ivp(lambda u, q: [k - f(u) / q[0]], [1 - d, theta], [bp * d],
                        method="LSODA", rtol=1e-12, atol=1e-16)
        return sol.y[0, -1] - k * theta

    return brentq(miss, 0.1, 1.0, xtol=1e-14)


@pytest.mark.parametrize("theta", [0.1, 0.25, 0.4])
def test_minimal_speed_closed_form(theta):
    k = minimal_speed(NonlinearitySpec.bistable_cubic(theta))
    assert k == pytest.approx((1 - 2 * theta) / math.sqrt(2), abs=1e-9)


def test_combustion_speed_against_oracle():
    assert _combustion_oracle(0.3) == pytest.approx(COMBUSTION_03_KAPPA, abs=1e-12)
    k = minimal_speed(NonlinearitySpec.combustion(0.3))
    assert k == pytest.approx(COMBUSTION_03_KAPPA, abs=1e-9)


def test_shoot_outcomes(cubic25):
    assert shoot(cubic25, 0.1).outcome is Outcome.UNDERSHOOT
    assert shoot(cubic25, 0.6).outcome is Outcome.OVERSHOOT
    assert shoot(cubic25, 0.35355339).outcome is Outcome.CONNECTED


def test_tail_rates_cubic(cubic25):
    k = 0.5 / math.sqrt(2)
    bm, bp = tail_rates(cubic25, k)
    assert bm == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert bp == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert bp**2 + k * bp - 0.75 == pytest.approx(0, abs=1e-14)
    assert bm**2 - k * bm - 0.25 == pytest.approx(0, abs=1e-14)


def test_combustion_tail_rate_minus_equals_speed():
    s = NonlinearitySpec.combustion(0.3)
    bm, _ = tail_rates(s, COMBUSTION_03_KAPPA)
    assert bm == pytest.approx(COMBUSTION_03_KAPPA, abs=1e-14)


def test_profile_is_logistic(profile25):
    t = np.linspace(-15, 15, 301)
    assert np.max(np.abs(profile25(t) - logistic(t))) < 1e-8
    assert profile25(0.0) == pytest.approx(0.5, abs=1e-12)
    assert profile25.residual < 1e-5


def test_profile_monotone_and_tails(profile25):
    assert np.all(np.diff(profile25.g_values) > 0)
    assert profile25.alpha_minus == pytest.approx(1.0, abs=1e-3)
    assert profile25.alpha_plus == pytest.approx(1.0, abs=1e-3)
    far = np.array([-60.0, 60.0])
    assert profile25(far)[0] == pytest.approx(logistic(-60.0), rel=1e-3)
    assert 1 - profile25(far)[1] == pytest.approx(1 - logistic(60.0), rel=1e-2)


def test_profile_inverse(profile25):
    assert profile_inverse(profile25, 0.5) == pytest.approx(0.0, abs=1e-9)
    assert profile_inverse(profile25, 0.75) == pytest.approx(math.sqrt(2) * math.log(3), abs=1e-6)
    u = np.array([1e-6, 0.1, 0.9, 1 - 1e-6])
    assert np.allclose(profile25(profile_inverse(profile25, u)), u, rtol=1e-6, atol=1e-12)


def test_g_ratio_matches_logistic(profile25, cubic25):
    t = np.array([-3.0, 0.5, 4.0])
    # logistic: g''/g' = (1 - 2 g) / sqrt 2
    expect = (1 - 2 * logistic(t)) / math.sqrt(2)
    assert np.allclose(g_ratio(profile25, cubic25, t), expect, atol=1e-7)


def test_combustion_profile_residual_and_tail():
    s = NonlinearitySpec.combustion(0.3)
    p = compute_wave(s)
    assert p.residual < 1e-5
    assert p.beta_minus_fit == pytest.approx(p.kappa_star, rel=1e-6)
    assert p.beta_plus_fit == pytest.approx(p.beta_plus, rel=1e-3)
