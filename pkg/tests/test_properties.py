"""Invariants checked on generated inputs."""

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from frontlab import config as cfgmod
from frontlab.hamilton_jacobi import HJParams, Planar, SupportSet, hopf_lax_forward, support_representation
from frontlab.io import read_snapshot, write_snapshot
from frontlab.levelset import extract_graph_time
from frontlab.nonlinearity import NonlinearitySpec
from frontlab.rd_solver import Boundary, Field, Grid, SnapshotSeries, max_dt, step
from frontlab.wave1d import profile_inverse

from conftest import BETA_25, KAPPA_25

SETTINGS = settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])

unit = st.floats(0.0, 1.0, allow_nan=False)
thetas = st.floats(0.02, 0.48)
specs = st.builds(lambda k, th: getattr(NonlinearitySpec, k)(th),
                  st.sampled_from(["bistable_cubic", "combustion"]), thetas)


@st.composite
def grids(draw, boundary=None):
    dim = draw(st.integers(1, 2))
    n = draw(st.integers(16, 40 if dim == 1 else 20))
    dx = draw(st.sampled_from([0.05, 0.1, 0.25, 0.5]))
    b = boundary or draw(st.sampled_from(list(Boundary)))
    return Grid(tuple((0.0, n * dx) for _ in range(dim)), dx, b)


@st.composite
def grid_and_values(draw, boundary=None):
    g = draw(grids(boundary))
    u = draw(hnp.arrays(float, g.shape, elements=unit))
    return g, u


@SETTINGS
@given(grid_and_values(), st.data(), specs, st.floats(0.2, 1.0))
def test_comparison_principle(gu, data, spec, frac):
    g, u = gu
    bump = data.draw(hnp.arrays(float, g.shape, elements=unit))
    v = np.minimum(1.0, u + bump)
    dt = frac * max_dt(g, spec)
    assert np.all(step(Field(g, 0.0, u), spec, dt).values <= step(Field(g, 0.0, v), spec, dt).values)


@SETTINGS
@given(grid_and_values(), specs, st.integers(1, 5))
def test_invariant_region(gu, spec, n):
    g, u = gu
    f = Field(g, 0.0, u)
    for _ in range(n):
        f = step(f, spec, max_dt(g, spec))
    assert f.values.min() >= 0.0 and f.values.max() <= 1.0


@SETTINGS
@given(grid_and_values(Boundary.PERIODIC), specs, st.integers(-6, 6), st.integers(-6, 6))
def test_translation_equivariance(gu, spec, s0, s1):
    g, u = gu
    shift = (s0, s1)[:g.dim]
    axes = tuple(range(g.dim))
    dt = max_dt(g, spec)
    a = np.roll(step(Field(g, 0.0, u), spec, dt).values, shift, axes)
    b = step(Field(g, 0.0, np.roll(u, shift, axes)), spec, dt).values
    assert np.array_equal(a, b)


@SETTINGS
@given(grid_and_values(), specs, st.integers(2, 7))
def test_worker_count_does_not_change_results(gu, spec, w):
    g, u = gu
    f = Field(g, 0.0, u)
    dt = max_dt(g, spec)
    assert np.array_equal(step(f, spec, dt, workers=1).values, step(f, spec, dt, workers=w).values)


@SETTINGS
@given(grid_and_values(), st.floats(0.0, 1e3), st.floats(0.05, 20.0))
def test_snapshot_round_trip(tmp_path, gu, t, power):
    g, u = gu
    f = Field(g, t, u ** power)
    p = tmp_path / "snap.csv"
    write_snapshot(p, f)
    back, _ = read_snapshot(p)
    assert back.grid == g and back.time == t and np.array_equal(back.values, f.values)


configs = st.builds(
    lambda kind, th, dx, dim, R, dt, workers, levels, kappa: cfgmod.RunConfig(
        nonlinearity=cfgmod.NonlinearitySection(kind, th),
        grid=cfgmod.GridSection(dx=dx, dim=dim),
        initial=cfgmod.InitialSection(R=R),
        time=cfgmod.TimeSection(dt=dt, workers=workers),
        analysis=cfgmod.AnalysisSection(levels=tuple(sorted(levels))),
        hj=cfgmod.HJSection(kappa=kappa)),
    st.sampled_from(["bistable_cubic", "combustion"]), thetas, st.floats(1e-3, 1.0), st.integers(1, 2),
    st.floats(0.5, 30.0), st.none() | st.floats(1e-5, 1e-1), st.none() | st.integers(1, 16),
    st.lists(st.floats(0.01, 0.99), min_size=1, max_size=4), st.none() | st.floats(0.0, 3.0))


@SETTINGS
@given(configs)
def test_config_round_trip(cfg):
    once = cfgmod.loads(cfgmod.dumps(cfg))
    assert once == cfg
    assert cfgmod.loads(cfgmod.dumps(once)) == once


@st.composite
def support_sets(draw):
    dim = draw(st.integers(1, 3))
    m = draw(st.integers(1, 5))
    raw = draw(hnp.arrays(float, (m, dim), elements=st.floats(-1, 1)).filter(
        lambda a: np.all(np.linalg.norm(a, axis=1) > 0.1)))
    return raw / (np.linalg.norm(raw, axis=1, keepdims=True) * KAPPA_25)


vec3 = hnp.arrays(float, 3, elements=st.floats(-10, 10))


@SETTINGS
@given(support_sets(), vec3, vec3, st.floats(0.0, 50.0))
def test_support_function_concave_and_homogeneous(Xi, x, y, s):
    d = Xi.shape[1]
    x, y = x[:d], y[:d]
    scale = 1.0 + (np.abs(x).sum() + np.abs(y).sum()) / KAPPA_25
    hx = support_representation(Xi, x)
    assert support_representation(Xi, s * x) == pytest.approx(s * hx, abs=1e-12 * scale * (1 + s))
    assert support_representation(Xi, 0.5 * (x + y)) >= 0.5 * (hx + support_representation(Xi, y)) - 1e-12 * scale
    # 1/kappa* Lipschitz
    assert abs(hx - support_representation(Xi, y)) <= np.linalg.norm(x - y) / KAPPA_25 * (1 + 1e-12) + 1e-12


@SETTINGS
@given(grids(), st.integers(5, 25), st.data(), st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_time_graphs_are_ordered_in_level(g, nt, data, l1, l2):
    incr = data.draw(hnp.arrays(float, (nt,) + g.shape, elements=st.floats(0.0, 1.0)))
    u = np.cumsum(incr, axis=0)
    top = u[-1].max()
    u = u / top if top > 0 else u
    ser = SnapshotSeries()
    for k in range(nt):
        ser.append(Field(g, float(k), u[k]))
    lo, hi = sorted((l1, l2))
    a = extract_graph_time(ser, lo)
    b = extract_graph_time(ser, hi)
    both = a.valid & b.valid
    assert np.all(a.heights[both] <= b.heights[both] + 1e-12)


@settings(max_examples=50, deadline=None)
@given(st.floats(-1.5, 1.5), st.floats(0.05, 1.0), st.floats(0.0, 1.0))
def test_forward_hopf_lax_increases_in_time(x, t, dt):
    P = HJParams(KAPPA_25, BETA_25, BETA_25)
    B = SupportSet([[1 / KAPPA_25], [-1 / KAPPA_25]])
    if t <= B(np.array([[x]]))[0]:
        t = B(np.array([[x]]))[0] + 0.05
    a = hopf_lax_forward([x], t, B, P).value
    b = hopf_lax_forward([x], t + dt, B, P).value
    assert b >= a + KAPPA_25 * dt - 1e-9


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(0.5, 5.0), st.floats(-math.pi, math.pi))
def test_forward_planar_is_affine(x, t, ang):
    P = HJParams(KAPPA_25, BETA_25, BETA_25)
    xi = np.array([math.cos(ang), math.sin(ang)]) / KAPPA_25
    pt = np.array([x, 0.3])
    t = max(t, float(pt @ xi) + 0.1)
    assert hopf_lax_forward(pt, t, Planar(xi), P).value == pytest.approx(KAPPA_25 * (t - pt @ xi), abs=1e-9)


@SETTINGS
@given(st.floats(1e-9, 1 - 1e-9))
def test_profile_inverse_round_trip(profile25, u):
    t = profile_inverse(profile25, u)
    assert profile25(t) == pytest.approx(u, rel=1e-6, abs=1e-12)
