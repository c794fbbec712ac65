import math

import numpy as np
import pytest

from frontlab.levelset import (LevelGraph, LevelSetError, MultipleCrossingError, Orientation, TimeGraphTracker,
                               extract_graph_space, extract_graph_time, lipschitz_estimate, monotonicity_ratio,
                               success_range)
from frontlab.nonlinearity import NonlinearitySpec
from frontlab.rd_solver import Field, Grid, SimulationConfig, SnapshotSeries, init_indicator, simulate
from frontlab.wave1d import profile_inverse

from conftest import KAPPA_25


def planar_series(profile, grid, times, kappa=KAPPA_25):
    ser = SnapshotSeries()
    c = grid.mesh()[-1]
    for t in times:
        ser.append(Field(grid, float(t), profile(c + kappa * t)))
    return ser


def test_planar_time_graph(profile25):
    g = Grid.uniform(-5, 5, 0.1)
    ser = planar_series(profile25, g, np.arange(-20, 20.01, 0.05))
    G = extract_graph_time(ser, 0.5)
    x = g.axis(0)
    assert G.valid.all()
    assert np.max(np.abs(G.heights + x / KAPPA_25)) < 1e-4
    L = lipschitz_estimate(G).global_L
    assert L == pytest.approx(1 / KAPPA_25, rel=0.01)


def test_constant_one_series_is_invalid():
    g = Grid.uniform(0, 4, 0.25)
    ser = SnapshotSeries()
    for t in range(3):
        ser.append(Field(g, float(t), np.ones(g.shape)))
    G = extract_graph_time(ser, 0.5)
    assert not G.valid.any() and np.all(np.isnan(G.heights))


def test_multiple_crossings_raise():
    g = Grid.uniform(0, 4, 0.25)
    ser = SnapshotSeries()
    for t, v in enumerate([0.2, 0.8, 0.2, 0.8]):
        ser.append(Field(g, float(t), np.full(g.shape, v)))
    with pytest.raises(MultipleCrossingError) as info:
        extract_graph_time(ser, 0.5)
    assert len(info.value.points) == g.shape[0]


def test_tracker_start_time_skips_transient():
    g = Grid.uniform(0, 4, 0.25)
    tr = TimeGraphTracker(0.5, t_start=1.5)
    for t, v in enumerate([0.2, 0.8, 0.2, 0.8]):
        tr(Field(g, float(t), np.full(g.shape, v)))
    G = tr.graph()
    assert G.valid.all() and np.allclose(G.heights, 2.5)


def test_space_graph_levels(profile25):
    g = Grid.uniform(-10, 10, 0.05, dim=2)
    f = Field(g, 0.0, profile25(g.mesh()[1]))
    G = extract_graph_space(f, 0.5, axis=1)
    assert G.orientation is Orientation.SPACE
    assert np.max(np.abs(G.heights)) < 1e-6
    G = extract_graph_space(f, 0.75, axis=1)
    assert np.allclose(G.heights, profile_inverse(profile25, 0.75), atol=1e-4)
    assert profile_inverse(profile25, 0.75) == pytest.approx(1.5537, abs=1e-4)


def test_space_graph_vfront_roof(profile25):
    g = Grid.uniform(-10, 10, 0.1, dim=2)
    X, Y = g.mesh()
    # level set y = -|x| / 2, increasing in y along each vertical line
    f = Field(g, 0.0, profile25(Y + 0.5 * np.abs(X)))
    G = extract_graph_space(f, 0.5, axis=1)
    assert np.allclose(G.heights, -0.5 * np.abs(g.axis(0)), atol=1e-6)


def test_lipschitz_line_and_constant():
    x = np.linspace(0, 1, 50)
    G = LevelGraph(Orientation.TIME, (x,), 2 * x, 0.5, np.ones(50, bool))
    assert lipschitz_estimate(G).global_L == pytest.approx(2.0)
    G = LevelGraph(Orientation.TIME, (x,), np.full(50, 3.0), 0.5, np.ones(50, bool))
    assert lipschitz_estimate(G).global_L == 0.0
    G = LevelGraph(Orientation.TIME, (x,), x, 0.5, np.eye(1, 50, dtype=bool)[0])
    with pytest.raises(LevelSetError):
        lipschitz_estimate(G)


def test_lipschitz_window_mode_matches_all_pairs_on_cone():
    a = np.linspace(-1, 1, 61)
    X, Y = np.meshgrid(a, a, indexing="ij")
    h = 3.0 * np.sqrt(X**2 + Y**2)
    G = LevelGraph(Orientation.TIME, (a, a), h, 0.5, np.ones_like(h, bool))
    est = lipschitz_estimate(G)       # > 2000 samples: windowed pairs
    assert est.global_L == pytest.approx(3.0, rel=1e-6)


def test_invalid_samples_carried_not_paired():
    x = np.linspace(0, 1, 11)
    h = x.copy()
    h[5] = 100.0
    valid = np.ones(11, bool)
    valid[5] = False
    G = LevelGraph(Orientation.TIME, (x,), h, 0.5, valid)
    assert np.isnan(G.heights[5])
    assert lipschitz_estimate(G).global_L == pytest.approx(1.0)


def test_monotonicity_ratio_planar(profile25):
    g = Grid.uniform(-10, 10, 0.05)
    ser = planar_series(profile25, g, [0.0, 0.01, 0.02])
    r = monotonicity_ratio(ser, 1)
    assert r.min_ratio == pytest.approx(KAPPA_25, rel=1e-2)


def test_monotonicity_ratio_constant():
    g = Grid.uniform(0, 4, 0.25)
    ser = SnapshotSeries()
    for t in range(3):
        ser.append(Field(g, float(t), np.full(g.shape, 0.3)))
    assert monotonicity_ratio(ser, 1).min_ratio == math.inf
    with pytest.raises(IndexError):
        monotonicity_ratio(ser, 0)


def test_late_indicator_run_positive_ratio_and_cone_graph(cubic25):
    g = Grid.uniform(-30, 30, 0.2)
    tr = TimeGraphTracker(0.5, t_start=3.0)
    ser = simulate(SimulationConfig(g, cubic25, init_indicator(g, 8.0, 0.05), T=40.0, record_every=1), tr)
    r = monotonicity_ratio(ser, len(ser) - 2)
    assert r.min_ratio > 0
    G = tr.graph()
    x = g.axis(0)
    ok = G.valid & (np.abs(x) > 12) & (np.abs(x) < 20)
    # cone: later crossing further out, symmetric
    right = ok & (x > 0)
    assert np.all(np.diff(G.heights[right]) > 0)
    assert np.allclose(G.heights[ok], G.heights[ok][::-1])


def test_success_range():
    g = Grid.uniform(0, 4, 0.25)
    ser = SnapshotSeries()
    for t, v in enumerate([0.1, 0.4, 0.6]):
        ser.append(Field(g, float(t), np.full(g.shape, v)))
    assert success_range(ser, [0.05, 0.3, 0.5, 0.7]) == [0.3, 0.5]


def test_round_trip_synthetic_graph(profile25):
    """Rasterize a known time graph through g and recover it within one grid cell."""
    g = Grid.uniform(-4, 4, 0.1)
    x = g.axis(0)
    h_true = 0.5 * np.sin(x) + np.abs(x) / KAPPA_25 * 0.3
    ser = SnapshotSeries()
    dt = 0.1 / (2 * KAPPA_25)
    for t in np.arange(-5, 15, dt):
        ser.append(Field(g, float(t), profile25(KAPPA_25 * (t - h_true))))
    G = extract_graph_time(ser, 0.5)
    assert G.valid.all()
    assert np.max(np.abs(G.heights - h_true)) < dt
