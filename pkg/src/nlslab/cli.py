"""Command-line front end.

Subcommands: solve, scan, rearrange, evolve, stability, splitcheck, gncert.
Exit codes: 0 success, 1 usage/configuration error, 2 numerical failure.
All CSV output uses 17-significant-digit decimal formatting so doubles
round-trip losslessly.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import config as cfgmod
from . import evolve as ev
from . import grid as g
from . import landscape as ls
from . import minimizer as mz
from . import model as mdl
from . import rearrange as ra
from .errors import BlowupError, CapacityError, ConfigError, GridMismatchError, NlsLabError
from .grid import Field, GridSpec, Pair


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _grid_from(cfg) -> GridSpec:
    return GridSpec(dim=cfg["dim"], extent=cfg["extent"], points_per_dim=cfg["points"])


def _params_from(cfg) -> mdl.ModelParams:
    a1, a2 = cfg["a1"], cfg["a2"]
    return mdl.ModelParams(
        dim=cfg["dim"],
        mu1=cfg["mu1"], mu2=cfg["mu2"],
        p1=cfg["p1"], p2=cfg["p2"],
        r1=cfg["r1"], r2=cfg["r2"],
        beta=cfg["beta"],
        a1=a1, a2=a2,
        allow_zero_mass=(a1 == 0 or a2 == 0),
    )


def _solver_cfg_from(cfg) -> mz.SolverConfig:
    return mz.SolverConfig(
        step=cfg["tau"],
        max_iters=cfg["max_iters"],
        tol_residual=cfg["tol_residual"],
        tol_energy=cfg["tol_energy"],
        init=cfg["init"],
        seed=cfg["seed"],
    )


def _evolve_cfg_from(cfg, delta=0.0) -> ev.EvolveConfig:
    return ev.EvolveConfig(
        dt=cfg["dt"],
        t_final=cfg["t_final"],
        record_every=cfg["record_every"],
        perturbation_size=delta,
        seed=cfg["seed"],
    )


def _prepare(args, need_config=True):
    overrides = {"seed": args.seed, "threads": cfgmod.resolve_threads(args.threads)}
    raw = cfgmod.parse_file(args.config) if need_config else {}
    cfg = cfgmod.resolve(raw, overrides)
    outdir = args.out
    os.makedirs(outdir, exist_ok=True)
    cfgmod.write_resolved(cfg, os.path.join(outdir, "resolved.cfg"))
    return cfg, outdir


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def cmd_solve(args) -> int:
    cfg, outdir = _prepare(args)
    params = _params_from(cfg)
    spec = _grid_from(cfg)
    gs = mz.solve(params, spec, _solver_cfg_from(cfg))
    g.write_snapshot(gs.state.first, os.path.join(outdir, "u1.nlsf"))
    g.write_snapshot(gs.state.second, os.path.join(outdir, "u2.nlsf"))
    _write_csv(os.path.join(outdir, "iterations.csv"), mz.GroundState.TRACE_HEADER, gs.trace_rows())
    summary = ",".join(
        [_fmt(gs.energy), _fmt(gs.lambda1), _fmt(gs.lambda2), _fmt(gs.residual), str(gs.iters), str(int(gs.converged))]
    )
    _write_csv(
        os.path.join(outdir, "summary.csv"),
        "energy,lambda1,lambda2,residual,iters,converged",
        [summary],
    )
    print(f"energy={_fmt(gs.energy)} lambda1={_fmt(gs.lambda1)} lambda2={_fmt(gs.lambda2)} residual={_fmt(gs.residual)}")
    return 0 if gs.converged else 2


def cmd_scan(args) -> int:
    cfg, outdir = _prepare(args)
    params = _params_from(cfg)
    spec = _grid_from(cfg)
    table = ls.scan(params, spec, cfg["a1_values"], cfg["a2_values"], _solver_cfg_from(cfg))
    _write_csv(os.path.join(outdir, "table.csv"), ls.MassGrid.CSV_HEADER, table.csv_rows())
    reports = [
        ls.check_negativity(table),
        ls.check_subadditivity(table, tol_solver=cfg["tol_solver"], strict_margin=cfg["strict_margin"]),
        ls.check_monotonicity(table, tol_solver=cfg["tol_solver"]),
        ls.check_continuity(table),
    ]
    rows = []
    for rep in reports:
        for v in rep.violations:
            rows.append(f"{rep.name},\"{v}\"")
    _write_csv(os.path.join(outdir, "violations.csv"), "check,violation", rows)
    ok = all(rep.passed for rep in reports)
    for rep in reports:
        print(f"{rep.name}: {'pass' if rep.passed else 'FAIL'}")
    if not ok:
        failing = [rep.name for rep in reports if not rep.passed]
        print(f"violations in: {', '.join(failing)}", file=sys.stderr)
    return 0 if ok else 2


def cmd_rearrange(args) -> int:
    outdir = args.out
    os.makedirs(outdir, exist_ok=True)
    u = g.read_snapshot(args.u_file)
    if args.v_file:
        v = g.read_snapshot(args.v_file)
        if u.grid != v.grid:
            raise ConfigError("input snapshots live on different grids")
        out = ra.merge_rearrange(u, v)
    else:
        v = Field.zero(u.grid)
        out = ra.schwarz(u)
    g.write_snapshot(out, os.path.join(outdir, "rearranged.nlsf"))
    report = ra.check_rearrangement_properties(
        Field(u.grid, np.abs(u.values)), Field(u.grid, np.abs(v.values))
    )
    _write_csv(os.path.join(outdir, "properties.csv"), ra.RearrangeReport.CSV_HEADER, [report.csv_row()])
    return 0


def cmd_evolve(args) -> int:
    cfg, outdir = _prepare(args)
    params = _params_from(cfg)
    spec = _grid_from(cfg)
    gs = mz.solve(params, spec, _solver_cfg_from(cfg))
    if not gs.converged:
        print("reference solve did not converge", file=sys.stderr)
        return 2
    run_cfg = _evolve_cfg_from(cfg)
    try:
        trace = ev.run(params, gs.state, run_cfg, observer=lambda t, s: ev.orbit_distance(gs, s))
    except BlowupError as err:
        trace = err.trace
    _write_csv(os.path.join(outdir, "trace.csv"), ev.StabilityTrace.CSV_HEADER, trace.csv_rows())
    return 0 if trace.completed else 2


def cmd_stability(args) -> int:
    cfg, outdir = _prepare(args)
    params = _params_from(cfg)
    spec = _grid_from(cfg)
    gs = mz.solve(params, spec, _solver_cfg_from(cfg))
    if not gs.converged:
        print("reference solve did not converge", file=sys.stderr)
        return 2
    all_ok = True
    for idx, delta in enumerate(cfg["perturbation_sizes"]):
        trace = ev.stability_experiment(params, gs, _evolve_cfg_from(cfg, delta))
        name = f"trace_{idx}.csv"
        _write_csv(os.path.join(outdir, name), ev.StabilityTrace.CSV_HEADER, trace.csv_rows())
        print(f"delta={_fmt(delta)} sup_distance={_fmt(trace.sup_distance)} completed={int(trace.completed)}")
        all_ok = all_ok and trace.completed
    return 0 if all_ok else 2


def cmd_splitcheck(args) -> int:
    cfg, outdir = _prepare(args)
    params = _params_from(cfg)
    spec = _grid_from(cfg)
    sep = cfg["separation"]
    if sep < 0:
        sep = spec.points_per_dim // 4
    width = cfg["split_width"]
    r2 = np.zeros(spec.shape)
    for x in spec.coords():
        r2 = r2 + x**2
    bump = np.exp(-r2 / (2 * width**2))
    u = Pair(
        g.scale_to_mass(Field(spec, bump), params.a1),
        g.scale_to_mass(Field(spec, bump), params.a2),
    )
    rows = []
    for s in (sep // 2, sep):
        rep = mdl.splitting_test(params, u, u, s)
        rows.append(rep.csv_row())
        print(f"separation={s} energy_defect={_fmt(rep.energy_defect)} coupling_defect={_fmt(rep.coupling_defect)}")
    _write_csv(os.path.join(outdir, "splitcheck.csv"), mdl.SplittingReport.CSV_HEADER, rows)
    return 0


def cmd_gncert(args) -> int:
    cfg, outdir = _prepare(args)
    params = _params_from(cfg)
    spec = _grid_from(cfg)
    state = mz.initial_state(params, spec, mz.SolverConfig(seed=cfg["seed"]))
    cert = mdl.gn_certificate(params, state)
    _write_csv(os.path.join(outdir, "gncert.csv"), mdl.GNCertificate.CSV_HEADER, [cert.csv_row()])
    print(f"q={_fmt(cert.q)} coupling_exponent={_fmt(cert.coupling_exponent)} coercive={int(cert.coercive)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nlslab")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_config=True):
        if need_config:
            p.add_argument("--config", required=True)
        p.add_argument("--out", default="nlslab_out")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=None)

    for name, fn in (
        ("solve", cmd_solve),
        ("scan", cmd_scan),
        ("evolve", cmd_evolve),
        ("stability", cmd_stability),
        ("splitcheck", cmd_splitcheck),
        ("gncert", cmd_gncert),
    ):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("rearrange")
    p.add_argument("u_file")
    p.add_argument("v_file", nargs="?", default=None)
    p.add_argument("--out", default="nlslab_out")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(fn=cmd_rearrange)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, GridMismatchError, FileNotFoundError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (CapacityError, BlowupError) as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 2
    except NlsLabError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
