"""Command-line front end.

Subcommands: diffusivity, solve, verify, reserve, genetics, simulate.
Parameters come from flags or from ``--config file.json`` (flags win). A
config file holding a JSON list runs each entry as an independent job on a
thread pool, writing into ``<out>/run-NNN``.

Library errors map to distinct exit codes (see :mod:`logistic_rd.errors`);
usage errors exit with 64.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import export
from .diffusivity import (
    DEFAULT_GRID,
    DEFAULT_RTOL,
    closed_form_iterate,
    solve_profile,
    start_value,
)
from .errors import CheckFailed, InadmissibleParams, LogisticRDError
from .genetics import GenotypeFitness, containment_feasibility, map_fitness
from .model import Kind, ReactionModel, consistency_constants, d0_from_rate
from .solution import TABLE_HEADER, assemble, critical_radius, profile_table
from .spatial import RadialMode, first_bessel_zero, phi, robin_radius
from .verify import (
    BoundaryCondition,
    compare,
    fd_simulate,
    invariant_checks,
)

EXIT_USAGE = 64

DEFAULTS = {
    "model": None,
    "s": None,
    "theta1": None,
    "K": 1.0,
    "A": None,
    "D0": None,
    "theta_max": None,
    "grid": DEFAULT_GRID,
    "tol": DEFAULT_RTOL,
    "out": None,
    "format": "csv",
    "theta_center0": 1.0,
    "dim": 2,
    "times": None,
    "radii": 257,
    # reserve / genetics
    "g": None,
    "radius": None,
    "arithmetic_progression": False,
    # simulate
    "bc": "dirichlet",
    "p": None,
    "H": None,
    "n_r": 257,
    "t_end": None,
    "dt": None,
    "samples": 11,
    "initial": "exact",
    "bump": 0.05,
    "no_reaction": False,
    "workers": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ------------------------------------------------------------------ config


def _floats(text):
    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).replace(";", ",").split(",") if v.strip()]


def load_config(path) -> dict | list:
    data = json.loads(Path(path).read_text())

    def norm(d):
        if not isinstance(d, dict):
            raise UsageError("config entries must be JSON objects")
        return {k.replace("-", "_"): v for k, v in d.items()}

    if isinstance(data, list):
        return [norm(d) for d in data]
    return norm(data)


def merge(file_cfg: dict | None, flags: dict) -> dict:
    cfg = dict(DEFAULTS)
    if file_cfg:
        unknown = set(file_cfg) - set(DEFAULTS) - {"command"}
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        cfg.update(file_cfg)
    cfg.update({k: v for k, v in flags.items() if v is not None and k in DEFAULTS})
    if cfg["tol"] is not None and not cfg["tol"] > 0:
        raise UsageError("--tol must be positive")
    return cfg


def build_model(cfg) -> ReactionModel:
    if cfg["model"] is None:
        raise UsageError("--model is required")
    if cfg["s"] is None:
        raise UsageError("--s is required")
    kind = Kind.parse(cfg["model"])
    theta1 = cfg["theta1"] if kind is Kind.FHN else None
    if kind is Kind.FHN and theta1 is None:
        raise UsageError("--theta1 is required for the fhn model")
    return ReactionModel(kind, float(cfg["s"]), None if theta1 is None else float(theta1))


def build_problem(cfg):
    """Model, symmetry parameters and anchors from exactly one of A, D0."""
    model = build_model(cfg)
    K = float(cfg["K"])
    A, D0 = cfg["A"], cfg["D0"]
    if (A is None) == (D0 is None):
        raise UsageError("supply exactly one of --A and --D0")
    if A is not None:
        D0 = d0_from_rate(model, K, float(A))
    params, anchors = consistency_constants(model, K, float(D0))
    return model, params, anchors


def _theta_max(cfg):
    return None if cfg["theta_max"] is None else float(cfg["theta_max"])


def _profile(cfg):
    model, params, anchors = build_problem(cfg)
    profile = solve_profile(model, params, _theta_max(cfg), float(cfg["tol"]), n_grid=int(cfg["grid"]))
    return model, params, anchors, profile


def _solution(cfg):
    model, params, anchors, profile = _profile(cfg)
    sol = assemble(model, params, profile, int(cfg["dim"]), float(cfg["theta_center0"]))
    return sol, anchors


def _out_dir(cfg) -> Path | None:
    return None if cfg["out"] is None else Path(cfg["out"])


def _emit_table(cfg, name, header, rows, plot=None) -> dict:
    """Write a table under --out, or to stdout when no directory is given."""
    out = _out_dir(cfg)
    fmt = cfg["format"]
    if out is None:
        if fmt == "json":
            sys.stdout.write(export.dumps(export.table_json(header, rows)))
        else:
            export.write_csv(sys.stdout, header, rows)
        return {}
    path = export.write_table(out / name, header, rows, fmt)
    files = {name: str(path)}
    if plot is not None and fmt == "csv":
        files[name + "_plot"] = str(export.write_gnuplot(path, header=header, **plot))
    return files


# ------------------------------------------------------------------ commands


def cmd_diffusivity(cfg) -> dict:
    """Compatible D(theta) plus the closed-form iterates D0, D1, D2 on its grid."""
    model, params, anchors, profile = _profile(cfg)
    th = profile.theta
    cols, notes = [], {}
    for level in (0, 1, 2):
        try:
            cols.append(np.asarray(closed_form_iterate(model, params, level, th), dtype=float))
        except LogisticRDError as exc:
            notes[f"D{level}"] = str(exc)
            cols.append(np.full_like(th, np.nan))
    summary = {
        "command": "diffusivity",
        "model": model.kind.value,
        "s": model.s,
        "theta1": model.theta1,
        "K": params.K,
        "A": params.A,
        "kappa": params.kappa,
        "anchors": anchors.as_dict(),
        "start_value": start_value(model, params),
        "D(0)": float(profile.D[0]),
        "D(1)": float(profile.D_at(1.0)) if profile.theta_max >= 1 else None,
        "relation_residual_max": float(np.max(np.abs(profile.relation_residual()))),
        "iterate_notes": notes,
    }
    inside = th <= 1.0
    for level in (1, 2):
        d = cols[level][inside]
        if np.all(np.isfinite(d)):
            summary[f"max_abs_D{level}_minus_numeric_on_0_1"] = float(np.max(np.abs(d - profile.D[inside])))
    files = {}
    if _out_dir(cfg) is not None:
        files.update(_emit_table(cfg, "profile", export.PROFILE_HEADER, np.column_stack([th, profile.U, profile.D])))
    table = np.column_stack([th, profile.D, *cols])
    files.update(_emit_table(cfg, "iterates", export.ITERATES_HEADER, table,
                             plot={"x": "theta", "ys": ["D_numeric", "D0", "D1", "D2"]}))
    summary["files"] = files
    return summary


def cmd_solve(cfg) -> dict:
    """Exact solution tables at the requested |A| t values."""
    sol, _ = _solution(cfg)
    if cfg["times"] is None:
        raise UsageError("--times is required (comma-separated |A| t values)")
    scaled = _floats(cfg["times"])
    rate = abs(sol.A)
    times = [v / rate for v in scaled]
    try:
        rows = profile_table(sol, times, int(cfg["radii"]))
    except LogisticRDError as exc:
        if getattr(exc, "earliest_t", None) is not None:
            exc.args = (f"{exc.args[0]} (|A| t >= {exc.earliest_t * rate:.10g}; "
                        f"lower --theta-center0 to reach earlier times)",)
        raise
    files = _emit_table(cfg, "solution", TABLE_HEADER, rows,
                        plot={"x": "r", "ys": ["theta"], "group_by": "t", "groups": times})
    return {
        "command": "solve",
        "model": sol.model.kind.value,
        "A": sol.A,
        "r1": sol.r1,
        "theta_center0": sol.theta_center0,
        "amplitude": sol.mode.amplitude,
        "scaled_times": scaled,
        "times": times,
        "earliest_scaled_time": sol.earliest_time() * rate,
        "files": files,
    }


def cmd_verify(cfg) -> dict:
    sol, anchors = _solution(cfg)
    checks = invariant_checks(sol, float(cfg["tol"]))
    report = {
        "command": "verify",
        "model": sol.model.kind.value,
        "A": sol.A,
        "K": sol.params.K,
        "anchors": anchors.as_dict(),
        "checks": [c.to_dict() for c in checks],
        "passed": all(c.passed for c in checks),
    }
    _write_report(cfg, report)
    if not report["passed"]:
        failed = ", ".join(c.name for c in checks if not c.passed)
        raise CheckFailed(f"failed checks: {failed}", report=report)
    return report


def cmd_reserve(cfg) -> dict:
    if cfg["model"] is None or cfg["s"] is None or cfg["D0"] is None:
        raise UsageError("reserve needs --model, --s and --D0")
    theta1 = None if cfg["theta1"] is None else float(cfg["theta1"])
    design = critical_radius(cfg["model"], float(cfg["D0"]), float(cfg["s"]), theta1)
    report = {"command": "reserve", **design.to_dict()}
    _write_report(cfg, report)
    return report


def cmd_genetics(cfg) -> dict:
    if cfg["g"] is None:
        raise UsageError("genetics needs --g g11,g12,g22")
    g = _floats(cfg["g"])
    if len(g) != 3:
        raise UsageError("--g takes exactly three values")
    f = GenotypeFitness(*g)
    m = map_fitness(f, bool(cfg["arithmetic_progression"]))
    report = {
        "command": "genetics",
        "g11": f.g11, "g12": f.g12, "g22": f.g22,
        "s": m.s, "nu": m.nu, "theta1": m.theta1,
        "family": m.family.value,
        "note": m.note,
        "feasibility": None,
        "r_crit": None,
    }
    if m.theta1 is not None and m.s > 0:
        needs_d0 = m.theta1 != 1
        if cfg["D0"] is not None or not needs_d0:
            D0 = 1.0 if cfg["D0"] is None else float(cfg["D0"])
            radius = None if cfg["radius"] is None else float(cfg["radius"])
            feas = containment_feasibility(m.s, m.theta1, D0, radius)
            report["feasibility"] = feas.to_dict()
            report["r_crit"] = feas.r_crit
        else:
            report["feasibility"] = {"criterion": "supply --D0 to evaluate the critical radius"}
    elif m.s <= 0:
        report["feasibility"] = {"criterion": f"s = {m.s} <= 0: no logistic source, criterion not applicable"}
    _write_report(cfg, report)
    return report


def cmd_simulate(cfg) -> dict:
    """Radial FD run, compared with the exact solution when seeded from it."""
    sol, _ = _solution(cfg)
    kind = cfg["bc"]
    if kind == "dirichlet":
        bc = BoundaryCondition.dirichlet()
    elif kind == "robin":
        if cfg["p"] is None:
            raise UsageError("--bc robin needs --p")
        bc = BoundaryCondition.robin(float(cfg["p"]))
    elif kind == "radiation":
        if cfg["H"] is None:
            raise UsageError("--bc radiation needs --H")
        bc = BoundaryCondition.radiation(float(cfg["H"]))
    else:
        raise UsageError(f"unknown boundary condition {kind!r}")
    if cfg["radius"] is not None:
        radius = float(cfg["radius"])
    elif kind == "robin":
        radius = robin_radius(sol.mode, bc.coef)
    else:
        radius = sol.r1
    n_r = int(cfg["n_r"])
    r = np.linspace(0.0, radius, n_r)
    if cfg["initial"] == "exact":
        if radius > sol.r1:
            raise InadmissibleParams(f"exact initial data needs radius <= r1 = {sol.r1}")
        theta0 = np.asarray(sol.theta(r, 0.0))
    elif cfg["initial"] == "bump":
        shape = RadialMode(int(cfg["dim"]), "positive", first_bessel_zero() / radius)
        theta0 = float(cfg["bump"]) * np.maximum(np.asarray(phi(shape, r)), 0.0)
    else:
        raise UsageError("--initial must be 'exact' or 'bump'")
    if kind == "dirichlet":
        theta0[-1] = 0.0
    t_end = 1.0 / abs(sol.A) if cfg["t_end"] is None else float(cfg["t_end"])
    traj = fd_simulate(
        theta0, sol.model, sol.profile, bc, t_end, None if cfg["dt"] is None else float(cfg["dt"]),
        radius=radius, dim=int(cfg["dim"]), n_samples=int(cfg["samples"]),
        reaction=not cfg["no_reaction"],
    )
    files = _emit_table(cfg, "trajectory", TABLE_HEADER, traj.table(),
                        plot={"x": "r", "ys": ["theta"], "group_by": "t", "groups": traj.times})
    summary = {
        "command": "simulate",
        "model": sol.model.kind.value,
        "bc": {"kind": bc.kind, "coef": bc.coef},
        "radius": radius,
        "n_r": n_r,
        "dt": traj.dt,
        "dt_bound": traj.info["dt_bound"],
        "n_steps": traj.info["n_steps"],
        "t_end": t_end,
        "center_theta": traj.theta[:, 0],
        "files": files,
    }
    if cfg["initial"] == "exact" and not cfg["no_reaction"] and kind != "radiation":
        rep = compare(traj, sol)
        summary["compare"] = {"times": rep.times, "linf": rep.linf, "l2": rep.l2, "max_linf": rep.max_linf}
    return summary


def _write_report(cfg, report):
    out = _out_dir(cfg)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{report['command']}.json").write_text(export.dumps(report))


COMMANDS = {
    "diffusivity": cmd_diffusivity,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "reserve": cmd_reserve,
    "genetics": cmd_genetics,
    "simulate": cmd_simulate,
}

# table-producing commands print the table itself when no --out is given
_TABLE_COMMANDS = {"diffusivity", "solve", "simulate"}


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("problem")
    g.add_argument("--config", help="JSON file of parameters (a list runs a sweep)")
    g.add_argument("--model", help="fisher | huxley | fhn")
    g.add_argument("--s", type=float, help="reaction strength s > 0")
    g.add_argument("--theta1", type=float, help="middle root of the fhn source")
    g.add_argument("--K", type=float, help="Helmholtz wavenumber, kappa = K^2 (default 1)")
    g.add_argument("--A", type=float, help="time rate A (exclusive with --D0)")
    g.add_argument("--D0", type=float, help="diffusivity at theta = 0 (exclusive with --A)")
    g.add_argument("--theta-max", type=float, help="upper end of the theta grid")
    g.add_argument("--grid", type=int, help="theta grid points (default 1001)")
    g.add_argument("--tol", type=float, help="integrator relative tolerance (default 1e-10)")
    g.add_argument("--theta-center0", type=float, help="initial central density (default 1)")
    g.add_argument("--dim", type=int, help="spatial dimension N (default 2)")
    g.add_argument("--out", help="output directory")
    g.add_argument("--format", choices=["csv", "json"], help="table format (default csv)")
    g.add_argument("--workers", type=int, help="threads for a config sweep")

    parser = _Parser(prog="logistic-rd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("diffusivity", parents=[common], help="compatible D(theta) and closed-form iterates")
    p = sub.add_parser("solve", parents=[common], help="exact solution tables")
    p.add_argument("--times", help="comma-separated |A| t values")
    p.add_argument("--radii", type=int, help="radial samples (default 257)")
    sub.add_parser("verify", parents=[common], help="run every invariant check")
    p = sub.add_parser("reserve", parents=[common], help="critical reserve radius")
    p = sub.add_parser("genetics", parents=[common], help="fitness triple -> reaction parameters")
    p.add_argument("--g", help="g11,g12,g22")
    p.add_argument("--radius", type=float, help="domain radius for the containment verdict")
    p.add_argument("--arithmetic-progression", action="store_true", default=None,
                   help="accept fitnesses in arithmetic progression (nu = 2)")
    p = sub.add_parser("simulate", parents=[common], help="finite-difference run")
    p.add_argument("--bc", choices=["dirichlet", "robin", "radiation"])
    p.add_argument("--p", type=float, help="Robin coefficient in -u_r = p u")
    p.add_argument("--H", type=float, help="radiation coefficient in -u_r = H u^2")
    p.add_argument("--radius", type=float, help="domain radius (default r1, or r2 for Robin)")
    p.add_argument("--n-r", type=int, help="radial nodes (default 257)")
    p.add_argument("--t-end", type=float, help="final time (default 1/|A|)")
    p.add_argument("--dt", type=float, help="time step (default: stability bound)")
    p.add_argument("--samples", type=int, help="sampled states including t = 0 (default 11)")
    p.add_argument("--initial", choices=["exact", "bump"], help="exact solution or J0 bump")
    p.add_argument("--bump", type=float, help="bump amplitude (default 0.05)")
    p.add_argument("--no-reaction", action="store_true", default=None, help="diffusion only")
    return parser


def _run_one(command, cfg):
    return COMMANDS[command](cfg)


def _error_record(exc):
    code = exc.exit_code if isinstance(exc, LogisticRDError) else EXIT_USAGE
    return {"error": type(exc).__name__, "message": str(exc), "exit_code": code}


def run_sweep(command, configs, flags, workers=None) -> tuple[list, int]:
    """Run independent configs on a thread pool; results keep input order."""
    base = flags.get("out") or DEFAULTS["out"]
    jobs = []
    for k, entry in enumerate(configs):
        cfg = merge(entry, {k2: v for k2, v in flags.items() if k2 != "out"})
        out = entry.get("out") or (None if base is None else str(Path(base) / f"run-{k:03d}"))
        if out is None and command in _TABLE_COMMANDS:
            raise UsageError("a sweep of table commands needs --out")
        cfg["out"] = out
        jobs.append(cfg)

    def task(cfg):
        try:
            return _run_one(command, cfg)
        except (LogisticRDError, UsageError, ValueError) as exc:
            return _error_record(exc)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(task, jobs))
    codes = [r["exit_code"] for r in results if isinstance(r, dict) and "exit_code" in r]
    return results, (codes[0] if codes else 0)


def _glue_negative_lists(argv):
    # "--times -1.5,0" would otherwise read -1.5,0 as an option
    out, it = [], iter(argv)
    for a in it:
        if a == "--times":
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_negative_lists(argv))
        flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
        file_cfg = load_config(args.config) if args.config else None
        if isinstance(file_cfg, list):
            results, code = run_sweep(args.command, file_cfg, flags, args.workers)
            sys.stdout.write(export.dumps(results))
            return code
        cfg = merge(file_cfg, flags)
        result = _run_one(args.command, cfg)
    except UsageError as exc:
        print(f"logistic-rd: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CheckFailed as exc:
        sys.stdout.write(export.dumps(exc.report))
        print(f"logistic-rd: {exc}", file=sys.stderr)
        return exc.exit_code
    except LogisticRDError as exc:
        print(f"logistic-rd: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"logistic-rd: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not (args.command in _TABLE_COMMANDS and cfg["out"] is None):
        sys.stdout.write(export.dumps(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
