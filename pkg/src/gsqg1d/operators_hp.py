"""Half-plane functionals and the nonlinear profile map.

Profiles store samples of f = Theta/x (even, positive, long-tailed).  The
map here is multiplicative,

    R(f)(x) = exp( - int_0^x T(f)(y) / (y (1 + T(f)(y))) dy ),

with T(f) >= 0 on admissible profiles.  The functionals are

    b(f) = 4 c0 int f(xi) xi^(-2a) dxi            (= -U'(0))
    c(f) = (8(1+2a)(1+a)/3) c0 int (1-f)/xi^(2+2a) dxi  (= lim T'(x)/x >= 0)

and c_ell = 1 + b(f), c_theta = 1.  Profiles decay like a power, so the
integrals carry an analytic power-law tail fitted on the last decade of
samples beyond the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline

from . import specfun as sf
from .errors import DomainError, NegativeT, TailFitError
from .mesh import Mesh
from .params import AlphaParams
from .quadrature import OperatorMatrix, OpKind, _leggauss, power_weight_vector

NEGATIVE_T_TOL = 1e-10
TAIL_FLOOR = 1e-250


@dataclass(frozen=True)
class ProfileHP:
    mesh: Mesh
    f: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        if f.shape != (self.mesh.n,):
            raise DomainError("profile samples must match the mesh")
        if abs(f[0] - 1.0) > 1e-12:
            raise DomainError("profile must be normalized to f(0) = 1")
        if np.any(f < 0) or np.any(f > 1 + 1e-12) or not np.all(np.isfinite(f)):
            raise DomainError("profile samples must lie in [0, 1]")
        object.__setattr__(self, "f", f)

    @property
    def theta(self) -> np.ndarray:
        return self.mesh.nodes * self.f


def make_profile_hp(mesh: Mesh, f) -> ProfileHP:
    return ProfileHP(mesh, np.asarray(f, dtype=float))


def seed_profile_hp(mesh: Mesh, params: AlphaParams) -> ProfileHP:
    """Default seed: the lower barrier f_l when the mesh resolves it, else a
    moderate power-law member (f_l degenerates to a numerical spike when
    delta_l is astronomically large, e.g. alpha near 1/2)."""
    fl = params.lower_barrier_hp(mesh.nodes)
    if fl[1] >= 0.5:
        return ProfileHP(mesh, fl)
    return ProfileHP(mesh, (1.0 + mesh.nodes**2) ** -1.0)


@dataclass(frozen=True)
class TailModel:
    """Power-law extrapolation f(xi) ~ f_end (xi/x_end)^(-delta) beyond the mesh."""
    x_end: float
    f_end: float
    delta: float
    valid: bool

    @staticmethod
    def none(x_end: float) -> "TailModel":
        return TailModel(x_end, 0.0, np.inf, False)


def fit_tail(p: ProfileHP, params: AlphaParams, strict: bool = True) -> TailModel:
    """Least-squares power fit on the last decade of samples.

    Profiles that have (numerically) compact support get a zero tail.  A
    fit shallower than delta = 1 - 2 alpha makes b(f) divergent on the full
    line and signals leaving the admissible class: strict mode raises,
    lenient mode (used for transient iterates, whose truncated functionals
    stay finite and self-correct) falls back to plain truncation.
    """
    x = p.mesh.nodes
    X = p.mesh.length
    sel = (x >= X / 10.0) & (p.f > TAIL_FLOOR)
    if sel.sum() < 4 or p.f[-1] <= TAIL_FLOOR:
        return TailModel.none(X)
    lx = np.log(x[sel])
    lf = np.log(p.f[sel])
    slope = np.polyfit(lx, lf, 1)[0]
    delta = -slope
    if delta <= 1.0 - 2 * params.alpha + 1e-6:
        if strict:
            raise TailFitError(
                f"fitted tail exponent {delta:.6g} <= 1-2a = {1 - 2 * params.alpha:.6g}")
        return TailModel.none(X)
    return TailModel(X, float(p.f[-1]), float(delta), True)


@dataclass(frozen=True)
class FunctionalsHP:
    b_frak: float
    c_frak: float
    c_ell: float
    c_theta: float
    lam: float
    c_ell_norm: float
    c_theta_norm: float
    tail: TailModel


def compute_functionals_hp(p: ProfileHP, params: AlphaParams,
                           tail: TailModel | None = None) -> FunctionalsHP:
    a = params.alpha
    mesh, f = p.mesh, p.f
    X = mesh.length
    if tail is None:
        tail = fit_tail(p, params)

    vb = power_weight_vector(mesh, -2.0 * a)
    b_int = float(vb @ f)
    if tail.valid:
        b_int += tail.f_end * X ** (1 - 2 * a) / (tail.delta + 2 * a - 1)
    b_frak = 4.0 * params.c0 * b_int

    vc = power_weight_vector(mesh, -2.0 - 2 * a)
    c_int = float(vc @ (1.0 - f))
    if tail.valid:
        c_int += (X ** (-1 - 2 * a) / (1 + 2 * a)
                  - tail.f_end * X ** (-1 - 2 * a) / (tail.delta + 1 + 2 * a))
    else:
        # no usable decay model: extrapolate f as the constant f(X)
        c_int += (1.0 - float(f[-1])) * X ** (-1 - 2 * a) / (1 + 2 * a)
    c_frak = (8 * (1 + 2 * a) * (1 + a) / 3.0) * params.c0 * c_int

    c_ell = 1.0 + b_frak
    focus = 2 * a * c_ell - 1.0
    lam = focus ** (1.0 / (1 - 2 * a)) if focus > 0 else float("nan")
    c_ell_norm = c_ell / focus if focus > 0 else float("nan")
    c_theta_norm = 1.0 / focus if focus > 0 else float("nan")
    return FunctionalsHP(b_frak=b_frak, c_frak=c_frak, c_ell=c_ell, c_theta=1.0,
                         lam=lam, c_ell_norm=c_ell_norm, c_theta_norm=c_theta_norm,
                         tail=tail)


def t_tail_correction(mesh: Mesh, params: AlphaParams, tail: TailModel) -> np.ndarray:
    """Contribution of the power-law tail beyond the truncation to T(f)(x):

        -2 c0 int_X^inf f'(xi) xi^(1-2a) F1_{-2a}(x/xi) dxi
      =  2 c0 delta f_end X^delta x^(1+g-delta) int_0^{x/X} t^(delta-g-2) F1_g(t) dt

    evaluated by Gauss-Legendre in t (the integrand is t^(delta-g) near 0).
    """
    if not tail.valid:
        return np.zeros(mesh.n)
    g = params.gamma_hp
    d = tail.delta
    x = mesh.nodes[1:]
    X = tail.x_end
    zq, wq = _leggauss(32)
    sup = x / X
    t_q = sup[:, None] * zq
    integ = t_q ** (d - g - 2) * sf.f1(g, t_q)
    vals = (integ @ wq) * sup
    out = np.zeros(mesh.n)
    out[1:] = 2.0 * params.c0 * d * tail.f_end * X**d * x ** (1 + g - d) * vals
    return out


def u_tail_correction(mesh: Mesh, params: AlphaParams, tail: TailModel) -> np.ndarray:
    """Velocity contribution of the power-law tail beyond the truncation:

        U_tail(x) = (2 c0 / (-2a)) int_X^inf xi f(xi) (|x-xi|^(-2a) - (x+xi)^(-2a)) dxi

    with f = f_end (xi/X)^(-delta).  In s = x/xi the kernel difference is
    (1-s)^(-2a) - (1+s)^(-2a) = 4 a s + O(s^3); the linear part integrates
    analytically and the remainder is smooth for the quadrature.
    """
    if not tail.valid:
        return np.zeros(mesh.n)
    a = params.alpha
    d = tail.delta
    x = mesh.nodes[1:]
    X = tail.x_end
    pref = (2.0 * params.c0 / (-2.0 * a)) * tail.f_end * X**d
    # int_X^inf xi^(1-d) [..] dxi = x^(2-d-2a) int_0^{x/X} s^(d+2a-3) [..] ds
    sup = x / X
    lead = 4.0 * a * sup ** (d + 2 * a - 1) / (d + 2 * a - 1)
    zq, wq = _leggauss(32)
    s_q = sup[:, None] * zq
    rem = (1.0 - s_q) ** (-2 * a) - (1.0 + s_q) ** (-2 * a) - 4.0 * a * s_q
    rem_int = ((s_q ** (d + 2 * a - 3) * rem) @ wq) * sup
    out = np.zeros(mesh.n)
    out[1:] = pref * x ** (2 - d - 2 * a) * (lead + rem_int)
    return out


def t_of_f(p: ProfileHP, T: OperatorMatrix, params: AlphaParams,
           tail: TailModel | None = None) -> np.ndarray:
    """T(f) at the nodes: matrix part plus the analytic tail correction."""
    if T.op_kind is not OpKind.T_HALF_PLANE_F1FORM:
        raise DomainError("half-plane T matrix required")
    if tail is None:
        tail = fit_tail(p, params)
    return T.apply(p.f) + t_tail_correction(p.mesh, params, tail)


def apply_Re_alpha(p: ProfileHP, T: OperatorMatrix, params: AlphaParams,
                   tail: TailModel | None = None) -> ProfileHP:
    """One sweep of R(f) = exp(-int_0^x T/(y(1+T)) dy).

    The integrand vanishes linearly at y = 0 (slope c(f)/2), so the
    cumulative trapezoid on the graded mesh is second order; the origin
    value is pinned to exactly 1.
    """
    x = p.mesh.nodes
    tf = t_of_f(p, T, params, tail)
    if np.min(tf) < -NEGATIVE_T_TOL:
        raise NegativeT(f"T(f) reached {np.min(tf)}; quadrature failure")
    g = np.zeros_like(tf)
    g[1:] = tf[1:] / (x[1:] * (1.0 + tf[1:]))
    expo = np.concatenate([[0.0], cumulative_trapezoid(g, x)])
    f_new = np.exp(-expo)
    f_new[0] = 1.0
    return ProfileHP(p.mesh, np.clip(f_new, 0.0, 1.0))


@dataclass(frozen=True)
class OdeResidualHP:
    max_normalized: float
    l2_normalized: float
    n_nodes: int


def ode_residual_hp(p: ProfileHP, params: AlphaParams,
                    u_op: OperatorMatrix | None = None,
                    functionals: FunctionalsHP | None = None,
                    window: tuple[float, float] = (0.0, 0.5)) -> OdeResidualHP:
    """Residual of (c_ell x + U) Theta' - c_theta Theta over
    [x_1, window_hi * x_{n-1}] (the far tail is excluded: truncation error
    dominates there).

    The equation's terms grow without bound over the six decades of a sinh
    mesh, so the residual is normalized pointwise by the local term scale
    |c_ell x Theta'| + |U Theta'| + |Theta| rather than by a global
    max |Theta'|.
    """
    from .quadrature import assemble_u_hp
    mesh = p.mesh
    x = mesh.nodes
    if u_op is None:
        u_op = assemble_u_hp(mesh, params, parity="odd")
    F = functionals if functionals is not None else compute_functionals_hp(p, params)
    th = p.theta
    u = u_op.apply(th) + u_tail_correction(mesh, params, F.tail)
    thp = CubicSpline(x, th, bc_type="not-a-knot")(x, 1)
    res = (F.c_ell * x + u) * thp - F.c_theta * th
    denom = np.abs(F.c_ell * x * thp) + np.abs(u * thp) + np.abs(th)
    lo = max(window[0] * mesh.length, x[1])
    hi = window[1] * mesh.length
    sel = (x >= lo) & (x <= hi) & (denom > 0)
    if not np.any(sel):
        return OdeResidualHP(0.0, 0.0, 0)
    r = res[sel] / denom[sel]
    return OdeResidualHP(float(np.max(np.abs(r))),
                         float(np.sqrt(np.mean(r**2))), int(r.size))
