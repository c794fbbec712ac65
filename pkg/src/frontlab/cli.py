"""``front-lab`` command-line driver.

Exit codes: 0 success, 1 acceptance failure (verify), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .blowdown import BlowdownError, convergence_diagnostic, phi_from_u, rescale
from .hamilton_jacobi import (HJError, HJParams, Planar, SupportSet, hopf_lax_backward, hopf_lax_forward,
                              support_representation, trace_characteristic, tw_value)
from .io import atomic_write, phi_snapshot_text, read_snapshot, write_graph, write_json, write_snapshot
from .levelset import (LevelSetError, TimeGraphTracker, extract_graph_space, lipschitz_estimate,
                       success_range)
from .nonlinearity import NonlinearityError
from .rd_solver import SolverError, check_cone_propagation, measure_front_speed, simulate
from .wave1d import compute_wave


class UsageError(Exception):
    pass


def _profile_for(cfg: cfgmod.RunConfig):
    return compute_wave(cfg.spec())


def _hj_params(cfg: cfgmod.RunConfig, profile=None) -> HJParams:
    h = cfg.hj
    if h.kappa_star is not None and h.beta_plus is not None and h.beta_minus is not None:
        return HJParams(h.kappa_star, h.beta_plus, h.beta_minus, h.kappa)
    profile = profile or _profile_for(cfg)
    return HJParams.from_profile(profile, h.kappa)


# -- subcommands -----------------------------------------------------------------------

def cmd_wave(args) -> int:
    cfg = cfgmod.load(args.config)
    prof = _profile_for(cfg)
    rows = ["t,g,g_prime"] + [f"{t:.17g},{g:.17g},{d:.17g}"
                              for t, g, d in zip(prof.t_grid, prof.g_values, prof.g_prime)]
    atomic_write(args.out, "\n".join(rows) + "\n")
    atomic_write(Path(args.out).with_suffix(".json"), prof.to_json())
    print(f"kappa* = {prof.kappa_star:.12g}, beta- = {prof.beta_minus:.12g}, beta+ = {prof.beta_plus:.12g}")
    return 0


def cmd_simulate(args) -> int:
    cfg = cfgmod.load(args.config)
    prof = _profile_for(cfg) if (cfg.needs_profile() or cfg.grid.dim == 1) else None
    sim = cfg.simulation(prof)
    series = simulate(sim)
    out = Path(args.out)
    for k, f in enumerate(series.fields):
        write_snapshot(out / f"snapshot_{k:05d}.csv", f)
    summary = {"n_snapshots": len(series), "times": series.times.tolist()}
    a = cfg.analysis
    if sim.grid.dim == 1 and cfg.initial.kind == "indicator":
        fit = measure_front_speed(series, a.levels[0], tuple(a.speed_window))
        ks = prof.kappa_star
        summary["front_speed"] = {"speed": fit.speed, "r2": fit.r2, "kappa_star": ks,
                                  "relative_error": (fit.speed - ks) / ks}
        cone = check_cone_propagation(series, ks, a.cone_b, a.cone_delta * ks, a.D_grace)
        summary["cone"] = {"passed": cone.passed, "delta": cone.delta, "D_grace": cone.D_grace}
    write_json(out / "summary.json", summary)
    print(json.dumps({k: v for k, v in summary.items() if k != "times"}, default=float))
    return 0


def cmd_levelset(args) -> int:
    if args.snapshot:
        field, _ = read_snapshot(args.snapshot)
        graph = extract_graph_space(field, args.lam, args.axis)
    else:
        if not args.config:
            raise UsageError("levelset needs --config or --snapshot")
        cfg = cfgmod.load(args.config)
        prof = _profile_for(cfg) if cfg.needs_profile() else None
        sim = cfg.simulation(prof)
        tracker = TimeGraphTracker(args.lam, t_start=cfg.analysis.t_start)
        series = simulate(sim, tracker)
        graph = tracker.graph()
        levels = np.round(np.linspace(0.05, 0.95, 19), 2)
        print(json.dumps({"lambda_success_range": success_range(series, levels)}))
    lip = None
    if graph.valid.sum() >= 2:
        est = lipschitz_estimate(graph)
        lip = {"global_L": est.global_L, "per_pair_max_location": [p.tolist() for p in est.per_pair_max_location]}
    write_graph(args.out, graph, lip)
    print(json.dumps({"valid": int(graph.valid.sum()), "lipschitz": lip}))
    return 0


def cmd_blowdown(args) -> int:
    cfg = cfgmod.load(args.config)
    prof = _profile_for(cfg)
    sim = cfg.simulation(prof)
    a = cfg.analysis
    tracker = TimeGraphTracker(a.levels[0], t_start=a.t_start)
    want = sorted(1.0 / e for e in a.eps_ladder)
    keep = {}

    def cb(f):
        tracker.update(f)
        for w in want:
            if w not in keep and f.time >= w - 1e-9:
                keep[w] = f.copy()

    simulate(sim, cb)
    graph = tracker.graph()
    out = Path(args.out)
    seq = []
    for e in a.eps_ladder:
        ge = rescale(graph, e, n=a.reference_n)
        seq.append(ge)
        write_graph(out / f"graph_eps_{e:.6g}.csv", ge)
        if 1.0 / e in keep:
            ph = rescale(phi_from_u(keep[1.0 / e], prof), e, n=a.reference_n)
            atomic_write(out / f"phi_eps_{e:.6g}.csv", phi_snapshot_text(ph.axes, ph.time, ph.values, e))
    report = convergence_diagnostic(seq, list(a.eps_ladder)).to_dict()
    report["note"] = "fixed dyadic eps ladder; limits are not claimed unique"
    write_json(out / "convergence.json", report)
    print(json.dumps(report))
    return 0


def _read_params(path: str):
    p = Path(path)
    if not p.is_file():
        raise cfgmod.ConfigError(f"params file not found: {p}")
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(p.read_text())
    except configparser.Error as exc:
        raise cfgmod.ConfigError(str(exc)) from exc
    run_text = "\n".join(f"[{s}]\n" + "\n".join(f"{k} = {v}" for k, v in cp.items(s))
                         for s in cp.sections() if s != "boundary")
    cfg = cfgmod.loads(run_text, base_dir=str(p.parent))
    params = _hj_params(cfg)
    if not cp.has_section("boundary"):
        raise cfgmod.ConfigError("params file needs a [boundary] section")
    b = dict(cp.items("boundary"))
    kind = b.get("kind", "planar")
    try:
        if kind == "planar":
            boundary = Planar(np.array([float(v) for v in b["xi"].replace(",", " ").split()]))
        elif kind == "support":
            Xi = [[float(v) for v in row.replace(",", " ").split()] for row in b["Xi"].split(";")]
            boundary = SupportSet(np.array(Xi))
        else:
            raise cfgmod.ConfigError(f"unknown boundary kind {kind!r}")
    except KeyError as exc:
        raise cfgmod.ConfigError(f"[boundary] missing key {exc}") from None
    return params, boundary


def cmd_hj_eval(args) -> int:
    params, boundary = _read_params(args.params)
    pts = np.genfromtxt(args.points, delimiter=",", names=True, ndmin=1)
    names = pts.dtype.names
    rows = []
    for rec in pts:
        vals = [float(rec[n]) for n in names]
        try:
            if args.mode in ("forward", "backward"):
                x, t = np.array(vals[:-1]), vals[-1]
                fn = hopf_lax_forward if args.mode == "forward" else hopf_lax_backward
                r = fn(x, t, boundary, params)
                value, arg = r.value, r.argopt
            elif args.mode == "tw":
                x = np.array(vals)
                hx = float(boundary(x[None, :-1])[0])
                value, arg = tw_value(x, boundary, params, 1 if x[-1] > hx else -1), np.array([])
            else:
                x = np.array(vals)
                xi = boundary.Xi if isinstance(boundary, SupportSet) else boundary.xi[None, :]
                value, arg = support_representation(xi, x), np.array([])
            rows.append(",".join(f"{v:.17g}" for v in vals) + f",{value:.17g}," + " ".join(f"{a:.17g}" for a in arg))
        except HJError as exc:
            rows.append(",".join(f"{v:.17g}" for v in vals) + f",nan,error: {exc}")
    atomic_write(args.out, ",".join(names) + ",value,argopt\n" + "\n".join(rows) + "\n")
    return 0


def cmd_hj_characteristic(args) -> int:
    params, boundary = _read_params(args.params)
    x0 = [float(v) for v in args.x0.split(",")]
    p0 = [float(v) for v in args.p0.split(",")]
    c = trace_characteristic(x0, args.t0, p0, args.value, boundary, params)
    write_json(args.out, c.to_dict())
    print(json.dumps(c.to_dict()))
    return 0


def cmd_verify(args) -> int:
    from .verify import run_suite

    def progress(res):
        print(res.line(), flush=True)

    report = run_suite(args.suite, progress=progress)
    text = json.dumps(report.to_dict(), indent=2, default=_jsonable)
    if args.out:
        atomic_write(args.out, text + "\n")
    else:
        print(text)
    return 0 if report.passed else 1


def _jsonable(o):
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o).__name__)


# -- parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="front-lab", description="Reaction-diffusion fronts and their blow-down limits.")
    sub = p.add_subparsers(dest="command", required=True)

    w = sub.add_parser("wave", help="travelling-wave profile and minimal speed")
    w.add_argument("--config", required=True)
    w.add_argument("--out", required=True)
    w.set_defaults(func=cmd_wave)

    s = sub.add_parser("simulate", help="run the solver and write snapshots")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True, help="output directory")
    s.set_defaults(func=cmd_simulate)

    lv = sub.add_parser("levelset", help="extract a level-set graph")
    lv.add_argument("--config")
    lv.add_argument("--snapshot", help="space-graph from a single snapshot file")
    lv.add_argument("--axis", type=int, default=-1)
    lv.add_argument("--lam", type=float, default=0.5)
    lv.add_argument("--out", required=True)
    lv.set_defaults(func=cmd_levelset)

    b = sub.add_parser("blowdown", help="eps-rescaled graphs and convergence report")
    b.add_argument("--config", required=True)
    b.add_argument("--out", required=True, help="output directory")
    b.set_defaults(func=cmd_blowdown)

    hj = sub.add_parser("hj", help="Hopf-Lax evaluations")
    hsub = hj.add_subparsers(dest="hj_command", required=True)
    ev = hsub.add_parser("eval")
    ev.add_argument("--mode", choices=["forward", "backward", "tw", "support"], required=True)
    ev.add_argument("--params", required=True)
    ev.add_argument("--points", required=True)
    ev.add_argument("--out", required=True)
    ev.set_defaults(func=cmd_hj_eval)
    ch = hsub.add_parser("characteristic")
    ch.add_argument("--params", required=True)
    ch.add_argument("--x0", required=True, help="comma-separated")
    ch.add_argument("--t0", type=float, required=True)
    ch.add_argument("--p0", required=True, help="comma-separated")
    ch.add_argument("--value", type=float, required=True)
    ch.add_argument("--out", required=True)
    ch.set_defaults(func=cmd_hj_characteristic)

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--suite", choices=["quick", "full"], default="quick")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return args.func(args)
    except (cfgmod.ConfigError, UsageError, NonlinearityError, OSError) as exc:
        print(f"front-lab: error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, LevelSetError, HJError, BlowdownError) as exc:
        print(f"front-lab: run failed: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
