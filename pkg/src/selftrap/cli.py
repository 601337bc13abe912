"""Command-line front end.

Every command writes delimited tables (CSV with a header row, or JSON with the
same fields) plus ``status.json`` into the output directory.  Exit codes:
0 success, 2 usage error, 3 no solution (past the fold), 4 solver failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .continuation import fold_curve, locate_fold, trace_branch
from .errors import InvalidContextError, NoSolutionError, SelftrapError
from .model import (
    ModelParams,
    PhysicalContext,
    atomic_units,
    rescale_observables,
    scaled_from_dimensionless,
    to_scaled,
)
from .observables import consistency_report, energy_components
from .radial import DEFAULT_POINTS, DEFAULT_R_MAX, RadialGrid
from .scf import scf_solve
from .shooting import BRANCHES, LOWER, solve
from .variational import gaussian_stationary_points, variational_fold, variational_observables

OUTPUT_ENV = "SELFTRAP_OUTPUT_DIR"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_SOLUTION = 3
EXIT_FAILURE = 4

SIG_DIGITS = 12

OBS_FIELDS = (
    "energy",
    "chemical_potential",
    "rms_radius",
    "peak_density",
    "kinetic",
    "trap",
    "contact",
    "gravity",
)


class UsageError(Exception):
    pass


def _round(x):
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, (bool, int)) or x is None:
        return x
    if isinstance(x, float):
        x = float(x)
        if not math.isfinite(x):
            return None
        return float(format(x, f".{SIG_DIGITS}g"))
    return x


def _cell(x):
    if x is None:
        return "nan"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, f".{SIG_DIGITS}g")
    return str(x)


def write_table(outdir: Path, name, columns, rows, fmt, meta=None):
    """Write ``rows`` (dicts) in fixed column order as ``name.csv`` or ``name.json``."""
    outdir.mkdir(parents=True, exist_ok=True)
    rows = [{k: _round(row.get(k)) for k in columns} for row in rows]
    if fmt == "json":
        doc = {"columns": list(columns), "rows": rows}
        if meta:
            doc["parameters"] = {k: _round(v) for k, v in meta.items()}
        path = outdir / f"{name}.json"
        path.write_text(json.dumps(doc, indent=2, allow_nan=False) + "\n")
    else:
        path = outdir / f"{name}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                w.writerow([_cell(row[k]) for k in columns])
    return path


def write_status(outdir: Path, status, reason="", evidence=None):
    outdir.mkdir(parents=True, exist_ok=True)
    doc = {"status": status, "reason": reason, "evidence": {k: _round(v) for k, v in (evidence or {}).items()}}
    text = json.dumps(doc, indent=2, sort_keys=True, allow_nan=False)
    (outdir / "status.json").write_text(text + "\n")
    return doc


# ---------------------------------------------------------------- arguments


def _add_common(p):
    p.add_argument("--out", type=Path, default=None, help=f"output directory (default ${OUTPUT_ENV} or .)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--r-max", type=float, default=DEFAULT_R_MAX, help="radial box size")
    p.add_argument("--points", type=int, default=DEFAULT_POINTS, help="radial grid points")
    p.add_argument("-v", "--verbose", action="store_true")


def _add_model(p, need_c=True):
    scaled = p.add_argument_group("scaled parameters")
    scaled.add_argument("--c", type=float, help="scaled scattering length N^2 a/a_u")
    scaled.add_argument("--g", type=float, help="scaled trap frequency gamma/N^2")
    phys = p.add_argument_group("physical parameters (exclusive with --c/--g)")
    phys.add_argument("--N", type=float, help="particle number")
    phys.add_argument("--a-over-au", type=float, help="scattering length in units of a_u")
    phys.add_argument("--gamma", type=float, help="trap quantum in units of E_u")
    phys.add_argument("--mass", type=float, help="atomic mass [kg]")
    phys.add_argument("--u", type=float, help="1/r interaction strength [J m]")
    phys.add_argument("--scattering-length", type=float, help="[m]")
    phys.add_argument("--omega0", type=float, help="trap frequency [rad/s]")


def resolve_model(args):
    """Return ``(ModelParams, extra)``; ``extra`` holds N and unit context when given."""
    physical = [args.N, args.a_over_au, args.gamma, args.mass, args.u, args.scattering_length, args.omega0]
    scaled = [args.c, args.g]
    if any(v is not None for v in physical) and any(v is not None for v in scaled):
        raise UsageError("scaled (--c/--g) and physical inputs are mutually exclusive")
    if any(v is not None for v in physical):
        if args.N is None:
            raise UsageError("physical inputs need --N")
        si = [args.mass, args.u, args.scattering_length, args.omega0]
        if any(v is not None for v in si):
            if args.a_over_au is not None or args.gamma is not None:
                raise UsageError("give either --a-over-au/--gamma or SI quantities, not both")
            if args.mass is None or args.u is None:
                raise UsageError("SI inputs need --mass and --u")
            ctx = PhysicalContext(
                N=args.N,
                mass=args.mass,
                u=args.u,
                scattering_length=args.scattering_length or 0.0,
                omega0=args.omega0 or 0.0,
            )
            a_u, E_u, gamma = atomic_units(ctx)
            return to_scaled(ctx), {"N": args.N, "a_u": a_u, "E_u": E_u, "gamma": gamma}
        if args.a_over_au is None:
            raise UsageError("physical inputs need --a-over-au (or SI quantities)")
        gamma = args.gamma or 0.0
        return scaled_from_dimensionless(args.N, args.a_over_au, gamma), {"N": args.N, "gamma": gamma}
    if args.c is None:
        raise UsageError("--c is required (or physical inputs)")
    g = args.g if args.g is not None else 0.0
    if g < 0:
        raise UsageError("--g must be >= 0")
    return ModelParams(args.c, g), {}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="selftrap",
        description="Self-trapped condensates with attractive 1/r interaction: solver and bifurcation tools.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one case, write profile and observables")
    _add_model(p)
    p.add_argument("--branch", choices=BRANCHES, default=LOWER)
    p.add_argument("--solver", choices=("shooting", "scf"), default="shooting")
    p.add_argument("--mixing", type=float, default=0.5, help="scf mixing fraction")
    p.add_argument("--scf-tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=5000, help="scf iteration budget")
    _add_common(p)

    p = sub.add_parser("branch", help="trace the solution branch in the central amplitude")
    p.add_argument("--g", type=float, default=0.0)
    p.add_argument("--psi0-min", type=float, default=0.01)
    p.add_argument("--psi0-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=40)
    _add_common(p)

    p = sub.add_parser("fold", help="locate the tangent bifurcation")
    p.add_argument("--g", type=float, default=0.0)
    _add_common(p)

    p = sub.add_parser("foldcurve", help="fold location versus trap frequency")
    p.add_argument("--g-values", type=float, nargs="+", required=True)
    _add_common(p)

    p = sub.add_parser("variational", help="stationary points of the Gaussian model")
    p.add_argument("--g", type=float, default=0.0)
    p.add_argument("--c", type=float, nargs="+", required=True)
    _add_common(p)

    p = sub.add_parser("compare", help="numeric versus variational observables")
    p.add_argument("--g", type=float, default=0.0)
    p.add_argument("--c", type=float, nargs="+", required=True)
    p.add_argument("--branch", choices=BRANCHES, default=LOWER)
    _add_common(p)
    return parser


# ----------------------------------------------------------------- commands


def cmd_solve(args, outdir):
    params, extra = resolve_model(args)
    grid = RadialGrid(args.r_max, args.points)
    if args.solver == "scf":
        if args.branch != LOWER:
            raise UsageError("the scf solver only follows the lower branch")
        sol = scf_solve(
            params.c, params.g, mixing=args.mixing, grid=grid, scf_tol=args.scf_tol, max_iter=args.max_iter
        )
    else:
        sol = solve(params, args.branch, grid)
    obs = energy_components(sol)
    report = consistency_report(sol)

    profile_cols = ("r", "psi", "V_g")
    r = sol.grid.r
    rows = [{"r": float(r[i]), "psi": float(sol.psi.values[i]), "V_g": float(sol.V_g.values[i])} for i in range(r.size)]
    write_table(outdir, "profile", profile_cols, rows, args.format)

    row = {"c": params.c, "g": params.g, "branch": sol.branch, "solver": sol.solver}
    row.update(obs.as_dict())
    row.update(report.as_dict())
    cols = ["c", "g", "branch", "solver", *OBS_FIELDS,
            "chemical_potential_defect", "virial_defect", "residual", "certified"]
    if "N" in extra:
        scaled = rescale_observables(obs, extra["N"])
        row["N"] = extra["N"]
        cols.append("N")
        for k in OBS_FIELDS:
            row[f"{k}_N"] = getattr(scaled, k)
            cols.append(f"{k}_N")
        for k in ("a_u", "E_u", "gamma"):
            if k in extra:
                row[k] = extra[k]
                cols.append(k)
    write_table(outdir, "observables", cols, [row], args.format, meta=_meta(args, params))
    write_status(outdir, "ok")
    print(f"eps = {obs.chemical_potential:.10g}  E = {obs.energy:.10g}  certified = {report.certified}")
    return EXIT_OK


def _meta(args, params=None):
    meta = {"r_max": args.r_max, "points": args.points}
    if params is not None:
        meta.update(c=params.c, g=params.g)
    return meta


def cmd_branch(args, outdir):
    if args.psi0_min <= 0 or args.psi0_max < args.psi0_min or args.steps < 1:
        raise UsageError("need 0 < psi0-min <= psi0-max and steps >= 1")
    grid = RadialGrid(args.r_max, args.points)
    diagram = trace_branch(args.g, (args.psi0_min, args.psi0_max), args.steps, grid)
    cols = ("c", "eps", "E", "rms", "peak", "branch", "psi0")
    rows = diagram.as_rows() + [
        {"c": None, "eps": None, "E": None, "rms": None, "peak": None, "branch": "gap", "psi0": p}
        for p in diagram.gaps
    ]
    rows.sort(key=lambda row: row["psi0"])
    meta = _meta(args)
    meta["g"] = args.g
    if diagram.fold is not None:
        meta.update(c_star=diagram.fold.c_star, eps_star=diagram.fold.eps_star, psi0_star=diagram.fold.psi0_star)
    write_table(outdir, "branch", cols, rows, args.format, meta=meta)
    write_status(outdir, "ok", evidence={"gaps": len(diagram.gaps)})
    print(f"{len(diagram.points)} points, {len(diagram.gaps)} gaps")
    return EXIT_OK


def cmd_fold(args, outdir):
    grid = RadialGrid(args.r_max, args.points)
    fold = locate_fold(args.g, grid)
    c_var, _ = variational_fold(args.g)
    row = {"g": fold.g, "c_star": fold.c_star, "eps_star": fold.eps_star, "psi0_star": fold.psi0_star,
           "c_star_variational": c_var}
    write_table(outdir, "fold", tuple(row), [row], args.format, meta=_meta(args))
    write_status(outdir, "ok")
    print(f"c_star = {fold.c_star:.6f}  (variational {c_var:.6f})")
    return EXIT_OK


def cmd_foldcurve(args, outdir):
    if any(g < 0 for g in args.g_values):
        raise UsageError("g values must be >= 0")
    grid = RadialGrid(args.r_max, args.points)
    points = fold_curve(args.g_values, grid)
    cols = ("g", "c_star", "eps_star", "psi0_star", "c_star_variational")
    rows = [{k: getattr(p, k) for k in cols} for p in points]
    write_table(outdir, "foldcurve", cols, rows, args.format, meta=_meta(args))
    gaps = sum(1 for p in points if math.isnan(p.c_star))
    write_status(outdir, "ok", evidence={"gaps": gaps})
    for p in points:
        print(f"g = {p.g:.6g}  c_star = {p.c_star:.6f}  variational = {p.c_star_variational:.6f}")
    return EXIT_OK


def cmd_variational(args, outdir):
    cols = ("c", "g", "sigma", "kind", *OBS_FIELDS)
    rows = []
    for c in args.c:
        for pt in gaussian_stationary_points(c, args.g):
            row = {"c": c, "g": args.g, "sigma": pt.sigma, "kind": pt.kind}
            row.update(variational_observables(pt).as_dict())
            rows.append(row)
    c_var, sigma_var = variational_fold(args.g)
    meta = {"g": args.g, "c_fold": c_var, "sigma_fold": sigma_var}
    write_table(outdir, "variational", cols, rows, args.format, meta=meta)
    write_status(outdir, "ok")
    print(f"{len(rows)} stationary points; variational fold at c = {c_var:.9f}")
    return EXIT_OK


def cmd_compare(args, outdir):
    grid = RadialGrid(args.r_max, args.points)
    kind = "min" if args.branch == LOWER else "max"
    quantities = (("E", "energy"), ("eps", "chemical_potential"), ("rms", "rms_radius"), ("peak", "peak_density"))
    cols = ["c", "g", "branch"]
    for short, _ in quantities:
        cols += [f"{short}_num", f"{short}_var", f"{short}_rel_dev"]
    rows = []
    for c in args.c:
        sol = solve(ModelParams(c, args.g), args.branch, grid)
        num = energy_components(sol)
        pts = [p for p in gaussian_stationary_points(c, args.g) if p.kind == kind]
        var = variational_observables(pts[0]) if pts else None
        row = {"c": c, "g": args.g, "branch": args.branch}
        for short, name in quantities:
            x = getattr(num, name)
            y = getattr(var, name) if var is not None else math.nan
            row[f"{short}_num"] = x
            row[f"{short}_var"] = y
            row[f"{short}_rel_dev"] = (y - x) / abs(x)
        rows.append(row)
    write_table(outdir, "compare", cols, rows, args.format, meta=_meta(args))
    write_status(outdir, "ok")
    for row in rows:
        print(f"c = {row['c']:.6g}  dE = {row['E_rel_dev']:+.3%}  dpeak = {row['peak_rel_dev']:+.3%}")
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "branch": cmd_branch,
    "fold": cmd_fold,
    "foldcurve": cmd_foldcurve,
    "variational": cmd_variational,
    "compare": cmd_compare,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    outdir = args.out or Path(os.environ.get(OUTPUT_ENV, "."))
    try:
        return COMMANDS[args.command](args, outdir)
    except (UsageError, InvalidContextError) as exc:
        parser.print_usage(sys.stderr)
        print(f"selftrap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoSolutionError as exc:
        doc = write_status(outdir, "no_solution", str(exc), exc.evidence)
        print(json.dumps(doc, sort_keys=True), file=sys.stderr)
        return EXIT_NO_SOLUTION
    except SelftrapError as exc:
        doc = write_status(outdir, "solver_failure", str(exc))
        print(json.dumps(doc, sort_keys=True), file=sys.stderr)
        return EXIT_FAILURE
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"selftrap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
