"""Full-plane functionals and the nonlinear profile map.

Profiles store samples of the even function f = -W/x (W the odd profile of
the transported quantity, normalized so f(0) = 1).  The map

    R(f) = max(0, 1 + T(f)/c(f))

is iterated to the self-similar shape; b(f) and c(f) are the scalar
functionals controlling the far-field value and the normalization at the
origin, and c_ell = c_omega = c(f) - b(f) is the scaling parameter of the
profile equation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline

from .errors import DegenerateProfile, DomainError
from .mesh import Mesh
from .params import AlphaParams
from .quadrature import (
    OperatorMatrix,
    OpKind,
    assemble_p1,
    power_weight_vector,
    t_kink_correction,
)

C_DEGENERATE = 1e-14


@dataclass(frozen=True)
class ProfileR2:
    mesh: Mesh
    f: np.ndarray
    support_idx: int = field(default=-1)

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        if f.shape != (self.mesh.n,):
            raise DomainError("profile samples must match the mesh")
        if abs(f[0] - 1.0) > 1e-12:
            raise DomainError("profile must be normalized to f(0) = 1")
        if np.any(f < 0) or not np.all(np.isfinite(f)):
            raise DomainError("profile samples must be finite and nonnegative")
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "support_idx", _support_index(f))

    @property
    def omega(self) -> np.ndarray:
        """Odd profile W = -x f on the half-line."""
        return -self.mesh.nodes * self.f

    @property
    def support_radius(self) -> float:
        return float(self.mesh.nodes[min(self.support_idx + 1, self.mesh.n - 1)])

    @property
    def compactly_supported(self) -> bool:
        return self.support_idx < self.mesh.n - 1


def _support_index(f: np.ndarray) -> int:
    pos = np.nonzero(f > 0.0)[0]
    return int(pos[-1]) if pos.size else 0


def make_profile_r2(mesh: Mesh, f) -> ProfileR2:
    return ProfileR2(mesh, np.asarray(f, dtype=float))


def seed_profile_r2(mesh: Mesh) -> ProfileR2:
    """Default starting shape max(0, 1 - x^2): the lower barrier itself."""
    return ProfileR2(mesh, np.maximum(0.0, 1.0 - mesh.nodes**2))


@dataclass(frozen=True)
class FunctionalsR2:
    b: float
    c: float
    c_ibp: float          # c(f) through the integration-by-parts form
    c_ell: float
    c_omega: float
    lam: float            # (-c_ell (2-2a))^(1/(2-2a)); nan while c_ell >= 0
    c_ell_norm: float     # the normalized value -1/(2-2a) the lambda map enforces


def compute_functionals_r2(p: ProfileR2, params: AlphaParams) -> FunctionalsR2:
    """b(f) = 2 c1 int (f - f_inf) xi^(1-2a);  c(f) = (2a(1+2a)/3) c1 int (1-f)/xi^(1+2a).

    The c-integral extends to infinity with 1 - f = 1 beyond the truncation;
    f_inf is zero once the support has detached from the right boundary and
    the last sample otherwise.
    """
    a = params.alpha
    mesh, f = p.mesh, p.f
    X = mesh.length
    f_inf = 0.0 if p.compactly_supported else float(f[-1])

    vb = power_weight_vector(mesh, 1.0 - 2 * a)
    b_int = float(vb @ f)
    if f_inf != 0.0:
        b_int -= f_inf * X ** (2 - 2 * a) / (2 - 2 * a)
    b = 2.0 * params.c1 * b_int

    vc = power_weight_vector(mesh, -1.0 - 2 * a)
    tail = (1.0 - f_inf) * X ** (-2 * a) / (2 * a)
    c = (2 * a * (1 + 2 * a) / 3.0) * params.c1 * (float(vc @ (1.0 - f)) + tail)

    # cross-check form: c = -((1+2a)/3) c1 int_0^X f' xi^(-2a) dxi; its
    # boundary term at X equals the analytic tail of the value form exactly
    S_deriv = _fprime_weight(mesh, -2.0 * a)
    c_ibp = -((1 + 2 * a) / 3.0) * params.c1 * float(S_deriv @ f)

    if not np.isfinite(c) or c <= C_DEGENERATE:
        raise DegenerateProfile(f"c(f) = {c} collapsed")
    c_ell = c - b
    two2a = 2.0 - 2 * a
    lam = (-c_ell * two2a) ** (1.0 / two2a) if c_ell < 0 else float("nan")
    return FunctionalsR2(b=b, c=c, c_ibp=c_ibp, c_ell=c_ell, c_omega=c_ell,
                         lam=lam, c_ell_norm=-1.0 / two2a)


_FPRIME_CACHE: dict[tuple, np.ndarray] = {}


def _fprime_weight(mesh: Mesh, beta: float) -> np.ndarray:
    """Weights v with v . f = int_0^X s_f'(xi) xi^beta dxi, beta in (-2, 0).

    The first cell uses the odd linear model f'(xi) ~ f'(x_1) xi/x_1 (the
    spline's own f'(0) is an O(h^2) artifact that would make the integral
    diverge for beta <= -1; the density is even, so f' vanishes at 0).
    """
    from .quadrature import _mesh_key
    key = _mesh_key(mesh) + (float(beta), "deriv")
    if key not in _FPRIME_CACHE:
        from math import comb

        from .quadrature import _leggauss, spline_derivative_matrix, GL_BULK, _NEXACT
        n = mesh.n
        x = mesh.nodes
        l, r = x[:-1], x[1:]
        h = r - l
        P = np.zeros((3, n - 1))
        for j in range(1, min(_NEXACT, n - 1)):
            for m in range(3):
                acc = 0.0
                for q in range(m + 1):
                    e = q + beta + 1
                    piece = np.log(r[j] / l[j]) if e == 0.0 else (r[j] ** e - l[j] ** e) / e
                    acc += comb(m, q) * (-l[j]) ** (m - q) * piece
                P[m, j] = acc
        zq, wq = _leggauss(GL_BULK)
        sel = np.arange(min(_NEXACT, n - 1), n - 1)
        xi_q = l[sel, None] + h[sel, None] * zq
        kern = xi_q ** beta
        base = xi_q - l[sel, None]
        for m in range(3):
            P[m, sel] = np.einsum("cq,q->c", kern * base**m, wq) * h[sel]
        F = np.zeros(n)
        D = np.zeros(n)
        F[:-1] += -(6 / h**2) * P[1] + (6 / h**3) * P[2]
        F[1:] += (6 / h**2) * P[1] - (6 / h**3) * P[2]
        D[:-1] += P[0] - (4 / h) * P[1] + (3 / h**2) * P[2]
        D[1:] += -(2 / h) * P[1] + (3 / h**2) * P[2]
        D[1] += x[1] ** (beta + 1) / (beta + 2)
        _FPRIME_CACHE[key] = F + spline_derivative_matrix(mesh).T @ D
    return _FPRIME_CACHE[key]


def apply_R_alpha(p: ProfileR2, T: OperatorMatrix, params: AlphaParams,
                  functionals: FunctionalsR2 | None = None,
                  kink_correction: bool = True) -> ProfileR2:
    """One sweep of the map R(f) = max(0, 1 + T(f)/c(f)); the origin value is
    pinned to exactly 1 (T(f)(0) = 0 identically)."""
    if T.op_kind is not OpKind.T_FULL_PLANE_F1FORM:
        raise DomainError("apply_R_alpha needs the full-plane T matrix")
    F = functionals if functionals is not None else compute_functionals_r2(p, params)
    tf = T.apply(p.f)
    if kink_correction and p.compactly_supported:
        tf = tf + t_kink_correction(T, p.f, p.support_idx, params)
    g = np.maximum(0.0, 1.0 + tf / F.c)
    g[0] = 1.0
    return ProfileR2(p.mesh, g)


@dataclass(frozen=True)
class OdeResidual:
    max_normalized: float
    l2_normalized: float
    n_nodes: int


def ode_residual_r2(p: ProfileR2, params: AlphaParams,
                    p1: OperatorMatrix | None = None,
                    functionals: FunctionalsR2 | None = None,
                    inner: float = 0.9) -> OdeResidual:
    """Pointwise residual of (c_ell x + u) W' - (c_omega + u_x) W on the inner
    part of the support; u reconstructed by cumulative trapezoid of u_x and
    W' from the (support-aware) spline.  Normalized by max |W'|."""
    mesh = p.mesh
    x = mesh.nodes
    if p1 is None:
        p1 = assemble_p1(mesh, params, parity="odd")
    F = functionals if functionals is not None else compute_functionals_r2(p, params)
    om = p.omega
    ux = p1.apply(om)
    u = np.concatenate([[0.0], cumulative_trapezoid(ux, x)])
    cut = min(p.support_idx + 1, mesh.n - 1)
    spl = CubicSpline(x[: cut + 1], om[: cut + 1], bc_type="not-a-knot")
    omp = np.zeros_like(om)
    omp[: cut + 1] = spl(x[: cut + 1], 1)
    res = (F.c_ell * x + u) * omp - (F.c_omega + ux) * om
    scale = np.max(np.abs(omp))
    if scale == 0.0:
        return OdeResidual(0.0, 0.0, 0)
    sel = (x > 0) & (x <= inner * p.support_radius)
    if not np.any(sel):
        return OdeResidual(0.0, 0.0, 0)
    r = res[sel] / scale
    return OdeResidual(float(np.max(np.abs(r))),
                       float(np.sqrt(np.mean(r**2))), int(r.size))
