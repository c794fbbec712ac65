from pathlib import Path

import numpy as np
import pytest

from frontlab import config as cfgmod
from frontlab.io import (SnapshotFormatError, UnsupportedDimensionError, phi_snapshot_text, read_graph,
                         read_snapshot, snapshot_text, write_graph, write_snapshot)
from frontlab.levelset import LevelGraph, Orientation
from frontlab.rd_solver import Boundary, Field, Grid, init_indicator

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def _field2d():
    g = Grid(((-4.0, 4.0), (-2.0, 3.0)), 0.25, Boundary.PERIODIC)
    rng = np.random.default_rng(3)
    return Field(g, 1.0 / 3.0, rng.random(g.shape))


def test_snapshot_round_trip_bit_exact(tmp_path):
    f = _field2d()
    p = tmp_path / "s.csv"
    write_snapshot(p, f, eps=0.125)
    back, meta = read_snapshot(p)
    assert back.grid == f.grid
    assert back.time == f.time
    assert np.array_equal(back.values, f.values)
    assert float(meta["eps"]) == 0.125
    assert not list(tmp_path.glob(".*tmp"))


def test_snapshot_1d_round_trip(tmp_path):
    g = Grid.uniform(-5, 5, 0.1)
    f = init_indicator(g, 2.0, 0.05)
    p = tmp_path / "a.csv"
    write_snapshot(p, f)
    back, _ = read_snapshot(p)
    assert np.array_equal(back.values, f.values)


def test_snapshot_dim3_rejected(tmp_path):
    text = snapshot_text(_field2d()).replace("# dim=2", "# dim=3", 1)
    p = tmp_path / "d3.csv"
    p.write_text(text)
    with pytest.raises(UnsupportedDimensionError) as exc:
        read_snapshot(p)
    assert exc.value.line == 1


def test_snapshot_truncated(tmp_path):
    lines = snapshot_text(_field2d()).splitlines()
    p = tmp_path / "t.csv"
    p.write_text("\n".join(lines[:-5]) + "\n")
    with pytest.raises(SnapshotFormatError, match="expected .* data rows"):
        read_snapshot(p)


def test_snapshot_bad_number_line(tmp_path):
    lines = snapshot_text(_field2d()).splitlines()
    lines[12] = lines[12].rsplit(",", 1)[0] + ",oops"
    p = tmp_path / "b.csv"
    p.write_text("\n".join(lines) + "\n")
    with pytest.raises(SnapshotFormatError, match="line 13"):
        read_snapshot(p)


def test_phi_snapshot_text_has_eps_and_nan():
    x = np.linspace(-1, 1, 5)
    v = np.array([np.nan, -np.inf, 0.0, 1.0, np.inf])
    text = phi_snapshot_text((x,), 1.0, v, 0.25)
    assert "# eps=0.25" in text
    assert "nan" in text and "-inf" in text


def test_graph_round_trip(tmp_path):
    x = np.linspace(-1, 1, 7)
    y = np.linspace(0, 2, 5)
    h = np.add.outer(x, y ** 2)
    valid = np.ones(h.shape, bool)
    valid[0, 0] = False
    g = LevelGraph(Orientation.TIME, (x, y), h, 0.5, valid)
    side = write_graph(tmp_path / "g.csv", g, {"global_L": 1.5})
    assert side.exists()
    back = read_graph(tmp_path / "g.csv")
    assert back.orientation is Orientation.TIME and back.lam == 0.5
    assert np.array_equal(back.valid, valid)
    assert np.array_equal(back.heights[valid], h[valid])
    assert all(np.array_equal(a, b) for a, b in zip(back.axes, g.axes))


def test_config_round_trip_and_builders():
    cfg = cfgmod.load(CONFIGS / "indicator2d.cfg")
    assert cfg.grid.dim == 2 and cfg.analysis.eps_ladder == (0.25, 0.125, 0.0625)
    again = cfgmod.loads(cfgmod.dumps(cfg))
    assert again == cfg
    g = cfg.build_grid()
    assert g.shape == (513, 513)
    assert not cfg.needs_profile()


def test_config_errors(tmp_path):
    with pytest.raises(cfgmod.ConfigError, match="unknown key"):
        cfgmod.loads("[grid]\nlo = 0\nwidth = 3\n")
    with pytest.raises(cfgmod.ConfigError, match="unknown section"):
        cfgmod.loads("[solver]\nx = 1\n")
    with pytest.raises(cfgmod.ConfigError, match="cannot read"):
        cfgmod.loads("[grid]\ndx = fine\n")
    with pytest.raises(cfgmod.ConfigError, match="not found"):
        cfgmod.load(tmp_path / "missing.cfg")
    with pytest.raises(cfgmod.ConfigError):
        cfgmod.loads("[nonlinearity]\nkind = quartic\n").spec()


def test_config_table_file_relative(tmp_path):
    u = np.linspace(0, 1, 41)
    rows = "\n".join(f"{float(a)!r},{float(a * (a - 0.25) * (1 - a))!r}" for a in u)
    (tmp_path / "f.csv").write_text("u,f\n" + rows + "\n")
    (tmp_path / "run.cfg").write_text("[nonlinearity]\nkind = tabulated\ntable_file = f.csv\n")
    spec = cfgmod.load(tmp_path / "run.cfg").spec()
    assert spec.kind == "tabulated"
