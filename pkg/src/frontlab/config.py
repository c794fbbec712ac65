"""Run configuration: ``[section]`` headers with ``key = value`` lines.

Everything is deterministic, so there is no seed.  ``parse -> dumps -> parse``
returns an equal object.
"""

from __future__ import annotations

import configparser
import dataclasses
import io
from dataclasses import dataclass, field
from pathlib import Path

from .nonlinearity import NonlinearitySpec
from .rd_solver import Boundary, Field, Grid, SimulationConfig, init_constant, init_indicator, init_planar, init_vfront


class ConfigError(ValueError):
    pass


@dataclass
class NonlinearitySection:
    kind: str = "bistable_cubic"
    theta: float = 0.25
    table_file: str | None = None


@dataclass
class GridSection:
    lo: float = -50.0
    hi: float = 150.0
    dx: float = 0.1
    dim: int = 1
    boundary: str = "neumann"


@dataclass
class InitialSection:
    kind: str = "indicator"       # indicator | planar | vfront | constant
    R: float = 10.0
    b: float = 0.05
    shift: float = 0.0
    half_width: float = 10.0
    value: float = 0.0


@dataclass
class TimeSection:
    T: float = 250.0
    dt: float | None = None
    record_every: int = 100
    workers: int | None = None


@dataclass
class AnalysisSection:
    levels: tuple[float, ...] = (0.5,)
    speed_window: tuple[float, ...] = (50.0, 250.0)
    cone_b: float = 0.05
    cone_delta: float = 0.1       # fraction of kappa*
    D_grace: float = 30.0
    eps_ladder: tuple[float, ...] = (0.25, 0.125, 0.0625)
    t_start: float = 0.0
    reference_n: int = 41


@dataclass
class HJSection:
    kappa_star: float | None = None
    beta_plus: float | None = None
    beta_minus: float | None = None
    kappa: float | None = None


SECTIONS = {"nonlinearity": NonlinearitySection, "grid": GridSection, "initial": InitialSection,
            "time": TimeSection, "analysis": AnalysisSection, "hj": HJSection}


@dataclass
class RunConfig:
    nonlinearity: NonlinearitySection = field(default_factory=NonlinearitySection)
    grid: GridSection = field(default_factory=GridSection)
    initial: InitialSection = field(default_factory=InitialSection)
    time: TimeSection = field(default_factory=TimeSection)
    analysis: AnalysisSection = field(default_factory=AnalysisSection)
    hj: HJSection = field(default_factory=HJSection)
    base_dir: str | None = field(default=None, compare=False)

    # -- builders --

    def spec(self) -> NonlinearitySpec:
        block = {k: str(v) for k, v in dataclasses.asdict(self.nonlinearity).items() if v is not None}
        try:
            return NonlinearitySpec.from_config(block, self.base_dir)
        except (ValueError, OSError) as exc:
            raise ConfigError(f"[nonlinearity]: {exc}") from exc

    def build_grid(self) -> Grid:
        g = self.grid
        try:
            return Grid.uniform(g.lo, g.hi, g.dx, g.dim, Boundary(g.boundary))
        except ValueError as exc:
            raise ConfigError(f"[grid]: {exc}") from exc

    def initial_field(self, grid: Grid, profile=None) -> Field:
        ini = self.initial
        if ini.kind == "indicator":
            return init_indicator(grid, ini.R, ini.b)
        if ini.kind == "constant":
            return init_constant(grid, ini.value)
        if profile is None:
            raise ConfigError(f"initial kind {ini.kind!r} needs the wave profile")
        if ini.kind == "planar":
            return init_planar(grid, profile, shift=ini.shift)
        if ini.kind == "vfront":
            return init_vfront(grid, profile, ini.half_width)
        raise ConfigError(f"unknown initial kind {ini.kind!r}")

    def simulation(self, profile=None) -> SimulationConfig:
        grid = self.build_grid()
        spec = self.spec()
        try:
            init = self.initial_field(grid, profile)
        except ValueError as exc:
            raise ConfigError(f"[initial]: {exc}") from exc
        t = self.time
        return SimulationConfig(grid, spec, init, t.T, t.dt, t.record_every, t.workers)

    def needs_profile(self) -> bool:
        return self.initial.kind in ("planar", "vfront")


# -- parsing / serialization ------------------------------------------------------------

def _convert(raw: str, type_str: str, where: str):
    s = raw.strip()
    if "None" in type_str and s.lower() in ("", "none"):
        return None
    try:
        if type_str.startswith("tuple"):
            return tuple(float(p) for p in s.replace(",", " ").split())
        if type_str.startswith("int"):
            return int(s)
        if type_str.startswith("float"):
            return float(s)
        return s
    except ValueError:
        raise ConfigError(f"{where}: cannot read {raw!r} as {type_str}") from None


def _render(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, tuple):
        return ", ".join(repr(float(x)) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def loads(text: str, base_dir: str | None = None) -> RunConfig:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep key case (R, T, D_grace)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    parts = {}
    for name in cp.sections():
        if name not in SECTIONS:
            raise ConfigError(f"unknown section [{name}]")
        cls = SECTIONS[name]
        types = {f.name: str(f.type) for f in dataclasses.fields(cls)}
        kw = {}
        for key, raw in cp.items(name):
            if key not in types:
                raise ConfigError(f"unknown key {key!r} in [{name}]")
            kw[key] = _convert(raw, types[key], f"[{name}] {key}")
        parts[name] = cls(**kw)
    return RunConfig(**parts, base_dir=base_dir)


def load(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return loads(path.read_text(), base_dir=str(path.parent))


def dumps(cfg: RunConfig) -> str:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    for name in SECTIONS:
        sec = getattr(cfg, name)
        cp[name] = {f.name: _render(getattr(sec, f.name)) for f in dataclasses.fields(sec)}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()
