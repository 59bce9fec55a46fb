"""Discrete verification of the invariant-set definitions and lemma bounds.

Each check reports a pass flag, its worst margin (positive = satisfied with
room, negative = violated by that much) and the location of the worst
margin.  One-sided derivatives are approximated by secants over the
bracketing cell; square-root convexity is tested through divided
differences in the variable s = x^2, which is literally the defining
condition.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators_hp import FunctionalsHP, ProfileHP
from .operators_r2 import FunctionalsR2, ProfileR2
from .params import AlphaParams


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    margin: float
    location: float


@dataclass(frozen=True)
class MembershipReport:
    set_kind: str
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "set_kind": self.set_kind,
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "margin": c.margin,
                 "location": c.location}
                for c in self.checks
            ],
        }


def _worst(name, margins, locations, tol):
    margins = np.asarray(margins, dtype=float)
    i = int(np.argmin(margins))
    return CheckResult(name, bool(margins[i] >= -tol), float(margins[i]),
                       float(np.asarray(locations)[i]))


def _default_tol(f: np.ndarray) -> float:
    return 1e-8 * (1.0 + float(np.max(np.abs(f))))


def _shape_checks(x, f, tol):
    """Checks shared by both invariant sets: origin value, monotonicity,
    square-root convexity.

    The divided differences in s = x^2 amplify the rounding already stored
    in the samples by 1/ds, which near the origin of a graded mesh dwarfs
    any fixed tolerance; the convexity margin therefore carries a floor of
    4 eps |f|_inf / min(ds, ds') per pair (pure float-representation
    allowance, not a discretization tolerance).
    """
    out = [_worst("origin_value", [-abs(f[0] - 1.0)], [0.0], tol)]
    out.append(_worst("nonincreasing", -np.diff(f), x[1:], tol))
    ds = np.diff(x**2)
    div = np.diff(f) / ds
    fmax = float(np.max(np.abs(f)))
    floor = 4.0 * np.finfo(float).eps * fmax / np.minimum(ds[:-1], ds[1:])
    out.append(_worst("sqrt_convexity", np.diff(div) + floor, x[1:-1], tol))
    return out


def _secant_slope(x, f, at):
    k = int(np.searchsorted(x, at, side="right") - 1)
    k = min(max(k, 0), x.size - 2)
    return (f[k + 1] - f[k]) / (x[k + 1] - x[k])


def check_V1(p: ProfileR2, params: AlphaParams, tol: float | None = None) -> MembershipReport:
    """Full-plane invariant set: nonnegative, nonincreasing, sqrt-convex,
    between max(0, 1-x^2) and max(1 - eta x^2, 1 - eta/4), slope at 1/2
    steeper than -eta."""
    x, f = p.mesh.nodes, p.f
    if tol is None:
        tol = _default_tol(f)
    checks = _shape_checks(x, f, tol)
    checks.insert(1, _worst("nonnegative", f, x, tol))
    lower = np.maximum(0.0, 1.0 - x**2)
    checks.append(_worst("lower_barrier", f - lower, x, tol))
    upper = np.maximum(1.0 - params.eta * x**2, 1.0 - params.eta / 4.0)
    checks.append(_worst("upper_barrier", upper - f, x, tol))
    slope = _secant_slope(x, f, 0.5)
    checks.append(_worst("slope_at_half", [-params.eta - slope], [0.5], tol))
    return MembershipReport("V1_full_plane", tuple(checks))


def check_V1_hp(p: ProfileHP, params: AlphaParams, tol: float | None = None) -> MembershipReport:
    """Half-plane invariant set: positive, nonincreasing, sqrt-convex,
    between the barriers f_l and f_u, slope at t0 steeper than
    -t0^(alpha - 3/2) (one-sided slope at the node nearest t0)."""
    x, f = p.mesh.nodes, p.f
    if tol is None:
        tol = _default_tol(f)
    checks = _shape_checks(x, f, tol)
    checks.insert(1, _worst("positive", f[1:], x[1:], tol))
    checks.append(_worst("lower_barrier", f - params.lower_barrier_hp(x), x, tol))
    checks.append(_worst("upper_barrier", params.upper_barrier_hp(x) - f, x, tol))
    j = int(np.argmin(np.abs(x - params.t0)))
    j = max(j, 1)
    slope = (f[j] - f[j - 1]) / (x[j] - x[j - 1])
    bound = -params.t0 ** (params.alpha - 1.5)
    checks.append(_worst("slope_at_t0", [bound - slope], [x[j]], tol))
    return MembershipReport("V1_half_plane", tuple(checks))


def _probe_points(p, n_probe=10):
    x = p.mesh.nodes
    return np.geomspace(x[1], x[-1], n_probe)


def check_lemma_bounds(p, params: AlphaParams, functionals,
                       t_values: np.ndarray | None = None,
                       tol: float | None = None) -> MembershipReport:
    """Testable lemma inequalities at 10 log-spaced probe points.

    Full plane: the c(f) upper bound
        c(f) <= ((1+2a)/(3(1-a))) c1 (1 - f(x))^min(1-a, a) (1 + x^-2a).
    Half plane: the b/c brackets and, when T(f) values are supplied, the
    concavity ledger T <= min(b, c x^2 / 2) with T/x^2 nonincreasing.
    """
    a = params.alpha
    x = p.mesh.nodes
    if tol is None:
        tol = _default_tol(p.f)
    probes = _probe_points(p)
    idx = np.searchsorted(x, probes)
    idx = np.clip(idx, 1, x.size - 1)
    checks = []
    if isinstance(functionals, FunctionalsR2):
        fx = p.f[idx]
        bound = ((1 + 2 * a) / (3 * (1 - a)) * params.c1
                 * (1 - fx) ** min(1 - a, a) * (1 + x[idx] ** (-2 * a)))
        checks.append(_worst("c_upper_bound", bound - functionals.c, x[idx], tol))
        return MembershipReport("lemma_bounds_full_plane", tuple(checks))
    if isinstance(functionals, FunctionalsHP):
        checks.append(_worst("b_lower", [functionals.b_frak - params.b_lo], [0.0], tol))
        checks.append(_worst("b_upper", [params.b_hi - functionals.b_frak], [0.0], tol))
        checks.append(_worst("c_upper", [params.c_hi - functionals.c_frak], [0.0], tol))
        c_floor = (8 * (1 + a) / (3 * (1 - 2 * a))) * params.c0 * params.t0 ** (-1.5 - a)
        checks.append(_worst("c_lower", [functionals.c_frak - c_floor], [0.0], tol))
        if t_values is not None:
            tv = t_values[idx]
            cap = np.minimum(functionals.b_frak,
                             0.5 * functionals.c_frak * x[idx] ** 2)
            checks.append(_worst("T_concavity_cap", cap - tv, x[idx], tol))
            ratio = tv / x[idx] ** 2
            checks.append(_worst("T_over_x2_nonincreasing", -np.diff(ratio),
                                 x[idx][1:], tol))
        return MembershipReport("lemma_bounds_half_plane", tuple(checks))
    raise TypeError("functionals must be FunctionalsR2 or FunctionalsHP")
