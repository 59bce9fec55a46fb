"""Command-line front end: solve, sweep, verify, limits, field2d.

Every run resolves its configuration (config file values overridden by
flags), writes the resolved configuration next to its outputs, and emits
CSV/JSON files for downstream plotting.  Numbers are written with 17
significant digits so the files round-trip 64-bit floats losslessly.

Exit codes: 0 success, 1 solver/verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import field2d as f2d
from . import operators_hp as ohp
from . import operators_r2 as or2
from .errors import GSQGError
from .fixedpoint import (
    burgers_limit_gap,
    sinc_limit_gap,
    solve_hp,
    solve_r2,
    sweep_alpha,
)
from .membership import check_V1, check_V1_hp
from .mesh import Mesh, mesh_from_nodes, power_mesh, sinh_mesh, uniform_mesh
from .params import make_alpha_params
from .quadrature import assemble_p1, assemble_u_hp
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline

FMT = "%.17g"
OUTDIR_ENV = "GSQG1D_OUTDIR"


def parse_mesh(spec: str) -> Mesh:
    """power:L:N[:P] | sinh:A:N | uniform:L:N"""
    parts = spec.split(":")
    try:
        kind = parts[0]
        if kind == "power":
            p = float(parts[3]) if len(parts) > 3 else 2.0
            return power_mesh(float(parts[1]), int(parts[2]), p)
        if kind == "sinh":
            return sinh_mesh(float(parts[1]), int(parts[2]))
        if kind == "uniform":
            return uniform_mesh(float(parts[1]), int(parts[2]))
    except (IndexError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"bad mesh spec {spec!r}: {exc}") from exc
    raise argparse.ArgumentTypeError(f"unknown mesh kind {parts[0]!r}")


def write_csv(path: Path, columns: dict) -> None:
    names = list(columns)
    rows = zip(*[np.asarray(columns[k], dtype=float) for k in names])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for row in rows:
            w.writerow([FMT % v for v in row])


def read_csv(path) -> dict:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        names = next(r)
        data = list(zip(*[[float(v) for v in row] for row in r]))
    return {k: np.asarray(v) for k, v in zip(names, data)}


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, default=_json_default)
        fh.write("\n")


def _outdir(args) -> Path:
    out = os.environ.get(OUTDIR_ENV) or args.out
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _dump_resolved_config(args, out: Path) -> None:
    resolved = {k: v for k, v in vars(args).items() if k != "func"}
    write_json(out / "resolved_config.json", resolved)


def _report_payload(rep, mesh_spec: str, tol: float) -> dict:
    F = rep.functionals
    payload = {
        "problem": rep.problem,
        "alpha": rep.alpha,
        "mesh": mesh_spec,
        "tol": tol,
        "converged": rep.converged,
        "iterations": rep.iterations,
        "residual_history": [list(t) for t in rep.residual_history],
        "membership": rep.membership.to_dict(),
        "support_radius": rep.support_radius,
    }
    if rep.problem == "r2":
        payload.update(b=F.b, c=F.c, c_ell=F.c_ell, c_omega=F.c_omega,
                       lam=F.lam, c_ell_norm=F.c_ell_norm, c_omega_norm=F.c_ell_norm)
    else:
        payload.update(b_frak=F.b_frak, c_frak=F.c_frak, c_ell=F.c_ell,
                       c_theta=F.c_theta, ratio=F.c_ell / F.c_theta, lam=F.lam,
                       c_ell_norm=F.c_ell_norm, c_theta_norm=F.c_theta_norm,
                       tail={"delta": F.tail.delta, "f_end": F.tail.f_end,
                             "valid": F.tail.valid})
    if rep.ode_residual is not None:
        payload["ode_residual"] = {
            "max_normalized": rep.ode_residual.max_normalized,
            "l2_normalized": rep.ode_residual.l2_normalized,
            "n_nodes": rep.ode_residual.n_nodes,
        }
    return payload


def _solve_one(args):
    params = make_alpha_params(args.alpha, half_plane=(args.problem == "hp"))
    mesh = parse_mesh(args.mesh)
    common = dict(tol=args.tol, max_iter=args.max_iter, damping=args.damping,
                  store_every=args.store_every)
    if args.problem == "r2":
        return params, mesh, solve_r2(params, mesh, **common)
    return params, mesh, solve_hp(params, mesh, **common)


def _profile_columns(rep, params, mesh) -> dict:
    x = mesh.nodes
    f = rep.profile.f
    if rep.problem == "r2":
        om = -x * f
        ux = assemble_p1(mesh, params, parity="odd").apply(om)
        u = np.concatenate([[0.0], cumulative_trapezoid(ux, x)])
        signed = om
    else:
        th = x * f
        u = (assemble_u_hp(mesh, params, parity="odd").apply(th)
             + ohp.u_tail_correction(mesh, params, rep.functionals.tail))
        ux = CubicSpline(x, u, bc_type="not-a-knot")(x, 1)
        signed = th
    return {"x": x, "f": f, "omega_or_theta": signed, "u": u, "ux": ux,
            "T_of_f": rep.t_values}


def cmd_solve(args) -> int:
    out = _outdir(args)
    _dump_resolved_config(args, out)
    params, mesh, rep = _solve_one(args)
    write_csv(out / "profile.csv", _profile_columns(rep, params, mesh))
    if rep.iterates:
        cols = {"x": mesh.nodes}
        for k, it in enumerate(rep.iterates):
            cols[f"iter_{k * max(args.store_every, 1)}"] = it
        write_csv(out / "iterates.csv", cols)
    write_json(out / "report.json", _report_payload(rep, args.mesh, args.tol))
    print(f"{'converged' if rep.converged else 'FAILED'} in {rep.iterations} sweeps; "
          f"outputs in {out}")
    return 0 if rep.converged else 1


def cmd_sweep(args) -> int:
    out = _outdir(args)
    _dump_resolved_config(args, out)
    mesh = parse_mesh(args.mesh)
    alphas = [float(a) for a in args.alphas.split(",") if a]
    rows = sweep_alpha(alphas, args.problem, mesh, tol=args.tol,
                       max_iter=args.max_iter, damping=args.damping)
    table = {}
    failed = False
    for row in rows:
        rep = row.pop("report", None)
        if "error" in row:
            failed = True
            continue
        for key, val in row.items():
            if isinstance(val, (int, float, np.floating, bool)):
                table.setdefault(key, []).append(float(val))
        if rep is not None:
            write_csv(out / f"profile_a{row['alpha']:g}.csv",
                      {"x": mesh.nodes, "f": rep.profile.f,
                       "omega_or_theta": (-1 if args.problem == "r2" else 1)
                       * mesh.nodes * rep.profile.f,
                       "f_rescaled": rep.rescaled_profile})
    if table:
        write_csv(out / "sweep.csv", table)
    write_json(out / "sweep_report.json",
               {"rows": [{k: v for k, v in r.items() if k != "report"}
                         for r in rows]})
    print(f"swept {len(alphas)} alphas; outputs in {out}")
    return 1 if failed else 0


def cmd_verify(args) -> int:
    out = _outdir(args)
    _dump_resolved_config(args, out)
    data = read_csv(args.profile)
    mesh = mesh_from_nodes(data["x"])
    params = make_alpha_params(args.alpha, half_plane=(args.problem == "hp"))
    try:
        if args.problem == "r2":
            p = or2.make_profile_r2(mesh, data["f"])
            report = check_V1(p, params)
            functionals = dataclasses.asdict(or2.compute_functionals_r2(p, params))
        else:
            p = ohp.make_profile_hp(mesh, data["f"])
            report = check_V1_hp(p, params)
            F = ohp.compute_functionals_hp(p, params)
            functionals = {k: (dataclasses.asdict(v) if dataclasses.is_dataclass(v) else v)
                           for k, v in dataclasses.asdict(F).items()}
    except GSQGError as exc:
        write_json(out / "verify_report.json",
                   {"passed": False, "error": f"{type(exc).__name__}: {exc}"})
        print(f"verification error: {exc}", file=sys.stderr)
        return 1
    payload = {"passed": report.passed, "membership": report.to_dict(),
               "functionals": functionals}
    write_json(out / "verify_report.json", payload)
    print("verification " + ("passed" if report.passed else "FAILED"))
    return 0 if report.passed else 1


def cmd_limits(args) -> int:
    out = _outdir(args)
    _dump_resolved_config(args, out)
    mesh = parse_mesh(args.mesh)
    gaps = {}
    failed = False
    if args.sinc:
        for alpha in [float(a) for a in args.alpha.split(",")]:
            rep = solve_r2(make_alpha_params(alpha), mesh, tol=args.tol,
                           compute_ode_residual=False)
            failed |= not rep.converged
            gaps.setdefault("sinc", []).append(
                {"alpha": alpha, "gap": sinc_limit_gap(rep),
                 "converged": rep.converged})
    if args.burgers:
        for alpha in [float(a) for a in args.alpha.split(",")]:
            rep = solve_hp(make_alpha_params(alpha, half_plane=True), mesh,
                           tol=args.tol, compute_ode_residual=False)
            failed |= not rep.converged
            F = rep.functionals
            gaps.setdefault("burgers", []).append(
                {"alpha": alpha, "gap": burgers_limit_gap(rep),
                 "ratio": F.c_ell / F.c_theta, "lower_bound": 1 / (2 * alpha),
                 "converged": rep.converged})
    write_json(out / "gaps.json", gaps)
    print(f"limit gaps written to {out / 'gaps.json'}")
    return 1 if failed else 0


def cmd_field2d(args) -> int:
    out = _outdir(args)
    _dump_resolved_config(args, out)
    params = make_alpha_params(args.alpha, half_plane=True)
    scale = args.bump_scale

    def theta0(x, y):
        return (x * np.exp(-(x / scale) ** 2 / 2)
                * y * np.exp(-(y / scale) ** 2 / 2) / scale)

    field = f2d.make_field(args.length, args.n, theta0)
    field = f2d.velocity_from_theta(field, params)
    lines = [float(v) for v in args.sections.split(",") if v]
    secs = f2d.cross_sections(field, xs=lines, ys=lines)
    cols = {"line": [], "coord": [], "theta": [], "u1": [], "u2": []}
    for key, sec in secs.items():
        axis, value = key.split("=")
        tag = (1 if axis == "x" else 2) * 1000.0 + float(value)
        cols["line"].extend([tag] * len(sec["coord"]))
        for name in ("coord", "theta", "u1", "u2"):
            cols[name].extend(sec[name])
    write_csv(out / "sections.csv", cols)
    if args.dump_field:
        with open(out / "field.bin", "wb") as fh:
            fh.write(np.uint64(args.n).astype("<u8").tobytes())
            fh.write(np.float64(args.length).astype("<f8").tobytes())
            fh.write(field.theta.astype("<f8").tobytes())
            fh.write(field.u1.astype("<f8").tobytes())
            fh.write(field.u2.astype("<f8").tobytes())
    print(f"sections written to {out / 'sections.csv'}")
    return 0


def _add_common(sp, mesh_default):
    sp.add_argument("--mesh", default=mesh_default,
                    help="power:L:N[:P] | sinh:A:N | uniform:L:N")
    sp.add_argument("--tol", type=float, default=1e-7)
    sp.add_argument("--max-iter", type=int, default=500, dest="max_iter")
    sp.add_argument("--damping", type=float, default=1.0)
    sp.add_argument("--out", default="out")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gsqg1d",
        description="Self-similar blow-up profiles for 1D gSQG reductions.")
    ap.add_argument("--config", default=None,
                    help="JSON file of defaults; flags override its values")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="one fixed-point solve")
    sp.add_argument("--problem", choices=["r2", "hp"], required=True)
    sp.add_argument("--alpha", type=float, required=True)
    _add_common(sp, "power:5:2000:2")
    sp.add_argument("--store-every", type=int, default=0, dest="store_every",
                    help="record every k-th iterate into iterates.csv")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("sweep", help="one solve per alpha")
    sp.add_argument("--problem", choices=["r2", "hp"], required=True)
    sp.add_argument("--alphas", required=True, help="comma-separated list")
    _add_common(sp, "power:5:2000:2")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="membership checks on a profile.csv")
    sp.add_argument("--profile", required=True)
    sp.add_argument("--problem", choices=["r2", "hp"], required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--out", default="out")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("limits", help="sinc / Burgers limiting-profile gaps")
    sp.add_argument("--sinc", action="store_true")
    sp.add_argument("--burgers", action="store_true")
    sp.add_argument("--alpha", required=True, help="comma-separated list")
    _add_common(sp, "power:5:2000:2")
    sp.set_defaults(func=cmd_limits)

    sp = sub.add_parser("field2d", help="2D velocity evaluation + cross sections")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--n", type=int, default=256)
    sp.add_argument("--length", type=float, default=16.0)
    sp.add_argument("--bump-scale", type=float, default=2.0, dest="bump_scale")
    sp.add_argument("--sections", default="0,1,4,16")
    sp.add_argument("--dump-field", action="store_true", dest="dump_field")
    sp.add_argument("--out", default="out")
    sp.set_defaults(func=cmd_field2d)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.config:
        with open(args.config) as fh:
            overrides = json.load(fh)
        passed = {a for a in (argv if argv is not None else sys.argv[1:])
                  if a.startswith("--")}
        for key, val in overrides.items():
            flag = "--" + key.replace("_", "-")
            if hasattr(args, key) and flag not in passed:
                setattr(args, key, val)
    try:
        return args.func(args)
    except GSQGError as exc:
        out = _outdir(args) if hasattr(args, "out") else Path(".")
        write_json(out / "error.json",
                   {"error": type(exc).__name__, "message": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
