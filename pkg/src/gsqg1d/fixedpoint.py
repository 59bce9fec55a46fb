"""Iteration drivers, stopping logic, scaling extraction, limit comparators.

Both drivers assemble the operator matrices once (they depend only on mesh
and alpha), then iterate the bare nonlinear map; an optional damping factor
in (0, 1] blends each sweep with the previous iterate.  Stopping follows
the sup change of the paper's stopping variable (w = -x f on the full
plane, Theta = x f on the half plane) together with the absolute change of
c_ell, both below the tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import operators_hp as ohp
from . import operators_r2 as or2
from .errors import DomainError, NewtonFail
from .membership import MembershipReport, check_V1, check_V1_hp
from .mesh import Mesh
from .params import AlphaParams, make_alpha_params
from .quadrature import assemble_T_f1form, t_kink_correction

DEFAULT_TOL = 1e-7
DEFAULT_MAX_ITER = 500


@dataclass(frozen=True)
class SolveReport:
    problem: str
    alpha: float
    profile: object
    functionals: object
    iterations: int
    converged: bool
    residual_history: tuple          # (sup profile-variable change, |delta c_ell|)
    membership: MembershipReport
    ode_residual: object | None
    support_radius: float | None
    rescaled_profile: np.ndarray
    iterates: tuple = field(default=())
    t_values: np.ndarray | None = None   # half plane: T(f*) at the nodes

    @property
    def mesh(self) -> Mesh:
        return self.profile.mesh


def _check_solver_args(tol, max_iter, damping):
    if not tol > 0:
        raise DomainError("tolerance must be positive")
    if max_iter < 1:
        raise DomainError("max_iter must be >= 1")
    if not 0 < damping <= 1:
        raise DomainError("damping must lie in (0, 1]")


def solve_r2(params: AlphaParams, mesh: Mesh, tol: float = DEFAULT_TOL,
             max_iter: int = DEFAULT_MAX_ITER, seed: or2.ProfileR2 | None = None,
             damping: float = 1.0, store_every: int = 0,
             compute_ode_residual: bool = True) -> SolveReport:
    """Iterate f <- R(f) on the full plane until sup|d(-xf)| and |d c_ell|
    drop below tol."""
    _check_solver_args(tol, max_iter, damping)
    T = assemble_T_f1form(mesh, params, "full_plane")
    p = seed if seed is not None else or2.seed_profile_r2(mesh)
    x = mesh.nodes
    history = []
    iterates = [p.f.copy()] if store_every else []
    F = or2.compute_functionals_r2(p, params)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        g = or2.apply_R_alpha(p, T, params, functionals=F)
        if damping < 1.0:
            fnew = damping * g.f + (1 - damping) * p.f
            fnew[0] = 1.0
            g = or2.ProfileR2(mesh, fnew)
        F_new = or2.compute_functionals_r2(g, params)
        dw = float(np.max(np.abs(x * (g.f - p.f))))
        dc = abs(F_new.c_ell - F.c_ell)
        history.append((dw, dc))
        p, F = g, F_new
        if store_every and (it % store_every == 0):
            iterates.append(p.f.copy())
        if dw < tol and dc < tol:
            converged = True
            break
    if store_every and (not iterates or iterates[-1] is not p.f):
        iterates.append(p.f.copy())

    lam = F.lam
    if np.isfinite(lam):
        rescaled = np.interp(lam * x, x, p.f, right=0.0)
    else:
        rescaled = p.f.copy()
    tvals = T.apply(p.f)
    if p.compactly_supported:
        tvals = tvals + t_kink_correction(T, p.f, p.support_idx, params)
    ode = or2.ode_residual_r2(p, params, functionals=F) if compute_ode_residual else None
    return SolveReport(
        problem="r2", alpha=params.alpha, profile=p, functionals=F,
        iterations=it, converged=converged, residual_history=tuple(history),
        membership=check_V1(p, params), ode_residual=ode,
        support_radius=p.support_radius, rescaled_profile=rescaled,
        iterates=tuple(iterates), t_values=tvals,
    )


def solve_hp(params: AlphaParams, mesh: Mesh, tol: float = DEFAULT_TOL,
             max_iter: int = DEFAULT_MAX_ITER, seed: ohp.ProfileHP | None = None,
             damping: float = 1.0, store_every: int = 0,
             compute_ode_residual: bool = True) -> SolveReport:
    """Iterate f <- R(f) on the half plane until sup|d(xf)| and |d c_ell|
    drop below tol."""
    _check_solver_args(tol, max_iter, damping)
    T = assemble_T_f1form(mesh, params, "half_plane")
    p = seed if seed is not None else ohp.seed_profile_hp(mesh, params)
    x = mesh.nodes
    history = []
    iterates = [p.f.copy()] if store_every else []
    tail = ohp.fit_tail(p, params, strict=False)
    F = ohp.compute_functionals_hp(p, params, tail)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        g = ohp.apply_Re_alpha(p, T, params, tail=tail)
        if damping < 1.0:
            fnew = damping * g.f + (1 - damping) * p.f
            fnew[0] = 1.0
            g = ohp.ProfileHP(mesh, fnew)
        tail_new = ohp.fit_tail(g, params, strict=False)
        F_new = ohp.compute_functionals_hp(g, params, tail_new)
        dth = float(np.max(np.abs(x * (g.f - p.f))))
        dc = abs(F_new.c_ell - F.c_ell)
        history.append((dth, dc))
        p, F, tail = g, F_new, tail_new
        if store_every and (it % store_every == 0):
            iterates.append(p.f.copy())
        if dth < tol and dc < tol:
            converged = True
            break
    if store_every and (not iterates or iterates[-1] is not p.f):
        iterates.append(p.f.copy())
    if converged:
        # the converged profile must be admissible: refit strictly
        tail = ohp.fit_tail(p, params, strict=True)
        F = ohp.compute_functionals_hp(p, params, tail)

    lam = F.lam
    if np.isfinite(lam):
        inside = lam * x <= x[-1]
        rescaled = np.where(
            inside,
            np.interp(lam * x, x, p.f),
            F.tail.f_end * np.maximum(lam * x / mesh.length, 1.0) ** (-F.tail.delta)
            if F.tail.valid else 0.0,
        )
    else:
        rescaled = p.f.copy()
    tvals = ohp.t_of_f(p, T, params, tail)
    ode = ohp.ode_residual_hp(p, params, functionals=F) if compute_ode_residual else None
    return SolveReport(
        problem="hp", alpha=params.alpha, profile=p, functionals=F,
        iterations=it, converged=converged, residual_history=tuple(history),
        membership=check_V1_hp(p, params), ode_residual=ode,
        support_radius=None, rescaled_profile=rescaled,
        iterates=tuple(iterates), t_values=tvals,
    )


# --------------------------------------------------------------------------
# limiting-profile comparators
# --------------------------------------------------------------------------

def sinc_profile(x) -> np.ndarray:
    """Predicted small-alpha limit sin(sqrt(6) x) / (sqrt(6) x)."""
    x = np.asarray(x, dtype=float)
    z = np.sqrt(6.0) * x
    return np.where(z == 0.0, 1.0, np.sin(z) / np.where(z == 0, 1.0, z))


def sinc_limit_gap(report: SolveReport) -> float:
    """sup over the support of |f - sinc|; meaningful for small alpha."""
    if report.problem != "r2":
        raise DomainError("sinc limit applies to full-plane reports")
    p = report.profile
    x = p.mesh.nodes
    sel = x <= p.support_radius
    return float(np.max(np.abs(p.f[sel] - sinc_profile(x[sel]))))


def burgers_profile(x, maxiter: int = 50) -> np.ndarray:
    """Monotone root F in (0, 1] of F + x^2 F^3 = 1, by Newton per point."""
    x = np.asarray(x, dtype=float)
    F = 1.0 / (1.0 + x ** (2.0 / 3.0))          # decent starting shape
    for _ in range(maxiter):
        resid = F + x * x * F**3 - 1.0
        F = F - resid / (1.0 + 3.0 * x * x * F * F)
        if np.max(np.abs(resid)) < 1e-14:
            return np.clip(F, 0.0, 1.0)
    raise NewtonFail("cubic root iteration did not converge")


def burgers_limit_gap(report: SolveReport, x_max: float = 10.0,
                      n_samples: int = 2001) -> float:
    """Gap between the rescaled profile and the implicit Burgers profile.

    The profile is first rescaled so f(sigma x) ~ 1 - x^2 near 0, with
    sigma = 2 / sqrt(c(f)) (the map forces f ~ 1 - c x^2 / 4 at the origin),
    which makes shapes comparable across alpha.
    """
    if report.problem != "hp":
        raise DomainError("Burgers limit applies to half-plane reports")
    F = report.functionals
    sigma = 2.0 / np.sqrt(F.c_frak)
    xs = np.linspace(0.0, x_max, n_samples)
    p = report.profile
    fx = np.interp(sigma * xs, p.mesh.nodes, p.f)
    return float(np.max(np.abs(fx - burgers_profile(xs))))


# --------------------------------------------------------------------------
# alpha sweeps
# --------------------------------------------------------------------------

def sweep_alpha(alphas, which: str, mesh: Mesh, tol: float = DEFAULT_TOL,
                max_iter: int = DEFAULT_MAX_ITER, damping: float = 1.0,
                compute_ode_residual: bool = False) -> list[dict]:
    """One solve per alpha; per-solve failures are collected, not raised."""
    if which not in ("r2", "hp"):
        raise DomainError("which must be 'r2' or 'hp'")
    rows = []
    for alpha in alphas:
        row = {"alpha": float(alpha)}
        try:
            params = make_alpha_params(alpha, half_plane=(which == "hp"))
            if which == "r2":
                rep = solve_r2(params, mesh, tol=tol, max_iter=max_iter,
                               damping=damping,
                               compute_ode_residual=compute_ode_residual)
                F = rep.functionals
                row.update(converged=rep.converged, iterations=rep.iterations,
                           c_ell=F.c_ell, c_norm=F.c_ell_norm, lam=F.lam,
                           support_radius=rep.support_radius,
                           membership_passed=rep.membership.passed)
                if alpha <= 0.05:
                    row["sinc_gap"] = sinc_limit_gap(rep)
            else:
                rep = solve_hp(params, mesh, tol=tol, max_iter=max_iter,
                               damping=damping,
                               compute_ode_residual=compute_ode_residual)
                F = rep.functionals
                row.update(converged=rep.converged, iterations=rep.iterations,
                           c_ell=F.c_ell, c_theta=F.c_theta,
                           ratio=F.c_ell / F.c_theta, lower_bound=1.0 / (2 * alpha),
                           c_ell_norm=F.c_ell_norm, c_theta_norm=F.c_theta_norm,
                           lam=F.lam, membership_passed=rep.membership.passed)
                if alpha >= 0.4:
                    row["burgers_gap"] = burgers_limit_gap(rep)
            row["report"] = rep
        except Exception as exc:   # noqa: BLE001 - sweep continues per contract
            row["error"] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows
