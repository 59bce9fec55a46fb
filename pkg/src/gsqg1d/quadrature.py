"""Dense product-integration matrices for the singular integral operators.

A density on the half-line mesh is represented by its not-a-knot cubic
spline; each matrix row integrates the operator kernel against the local
spline polynomial so that applying the matrix to grid samples approximates
the continuum operator applied to the interpolant.  Per (row, cell) the
scheme picks one of three routes:

  * exact closed-form moments of the power kernel against the polynomial
    basis (cells at or next to the singular point; the principal-value
    cancellation appears as the finite limit of the paired one-sided
    antiderivatives at the node, implemented by dropping the divergent
    |0|^beta terms, which carry equal and opposite coefficients from the
    two cells sharing the node),
  * fixed-order Gauss-Legendre where the kernel is smooth relative to the
    cell (normalized distance beyond ``FAR_SWITCH`` or generic bulk cells),
  * series/decomposition routes for the velocity-gradient kernels
    xi^(1+g) F1(x/xi), whose nonsmooth part sgn(xi-x)|xi-x|^(1+g) *
    ((1+g) xi + x) / (g(1+g)(2+g)x) has elementary moments.

Full-line operators fold the reflected contribution from xi < 0 into the
half-line weights using the stated parity of the density.  For odd parity
the weights assume density(0) = 0 (true for the odd extensions the solvers
use); the x = 0 row of an odd-kernel operator is identically zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np
from scipy.interpolate import CubicSpline

from . import specfun as sf
from .errors import AssemblyError, DomainError
from .mesh import Mesh
from .params import AlphaParams

FAR_SWITCH = 50.0        # |cell center - singularity| / width beyond which GL is used
DIAG_CELLS_BACK = 4      # cells before the diagonal treated by exact moments
DIAG_CELLS_FWD = 3       # cells after the diagonal treated by exact moments
GL_BULK = 8
GL_DIAG = 12


class OpKind(enum.Enum):
    P1_FULL_PLANE = "p1_full_plane"
    U_HALF_PLANE = "u_half_plane"
    T_FULL_PLANE_F1FORM = "t_full_plane_f1form"
    T_HALF_PLANE_F1FORM = "t_half_plane_f1form"


@dataclass(frozen=True)
class OperatorMatrix:
    weights: np.ndarray
    op_kind: OpKind
    mesh: Mesh
    alpha: float
    parity: str = "odd"

    def apply(self, values: np.ndarray) -> np.ndarray:
        return self.weights @ np.asarray(values, dtype=float)

    def dump(self, path) -> None:
        """Row-major float64 little-endian, preceded by n as uint64."""
        n = np.uint64(self.weights.shape[0])
        with open(path, "wb") as fh:
            fh.write(n.astype("<u8").tobytes())
            fh.write(self.weights.astype("<f8").tobytes())


def load_weights(path) -> np.ndarray:
    with open(path, "rb") as fh:
        n = int(np.frombuffer(fh.read(8), dtype="<u8")[0])
        data = np.frombuffer(fh.read(8 * n * n), dtype="<f8")
    return data.reshape(n, n).copy()


# --------------------------------------------------------------------------
# not-a-knot spline machinery
# --------------------------------------------------------------------------

_SPLINE_CACHE: dict[tuple, np.ndarray] = {}


def _mesh_key(mesh: Mesh) -> tuple:
    """Cache key covering loaded/custom meshes, not just constructor params."""
    return (mesh.kind, mesh.kind_params, mesh.n, hash(mesh.nodes.tobytes()))


def spline_derivative_matrix(mesh: Mesh) -> np.ndarray:
    """Dense matrix S with (S f)_i = s'(x_i) for the not-a-knot spline s of f."""
    key = _mesh_key(mesh)
    if key not in _SPLINE_CACHE:
        n = mesh.n
        x = mesh.nodes
        S = np.empty((n, n))
        block = 512
        for j0 in range(0, n, block):
            j1 = min(j0 + block, n)
            basis = np.zeros((n, j1 - j0))
            basis[np.arange(j0, j1), np.arange(j1 - j0)] = 1.0
            S[:, j0:j1] = CubicSpline(x, basis, axis=0, bc_type="not-a-knot")(x, 1)
        _SPLINE_CACHE[key] = S
    return _SPLINE_CACHE[key]


def hermite_cell_coeffs(x: np.ndarray, f: np.ndarray, d: np.ndarray):
    """Cell polynomial coefficients a0..a3 about the left node from values
    and nodal derivatives:  s(xi) = sum_m a_m (xi - x_j)^m on cell j."""
    h = np.diff(x)
    slope = np.diff(f) / h
    a0 = f[:-1]
    a1 = d[:-1]
    a2 = (3 * slope - 2 * d[:-1] - d[1:]) / h
    a3 = (d[:-1] + d[1:] - 2 * slope) / h**2
    return a0, a1, a2, a3


# --------------------------------------------------------------------------
# elementary antiderivatives (vectorized, PV drop convention at w = 0)
# --------------------------------------------------------------------------

def _pow_antider(w: np.ndarray, beta: float, signed: bool) -> np.ndarray:
    """Antiderivative at w of |w|^(beta-1) * (sgn(w) if signed else 1).

    signed=False integrand |w|^(beta-1)*sgn(w) -> antiderivative |w|^beta/beta
    signed=True  integrand |w|^(beta-1)        -> antiderivative sgn(w)|w|^beta/beta
    (beta == 0 gives ln|w|).  Divergent values at w == 0 are dropped: the
    paired one-sided limits cancel exactly in the assembled weights.
    """
    aw = np.abs(w)
    if beta == 0.0:
        with np.errstate(divide="ignore"):
            out = np.log(aw)
        return np.where(w == 0.0, 0.0, out)
    with np.errstate(divide="ignore"):
        out = aw**beta / beta
    if beta < 0:
        out = np.where(w == 0.0, 0.0, out)
    if signed:
        out = out * np.sign(w)
    return out


def _power_kernel_moments(delta, wlo, whi, two_alpha: float, odd_kernel: bool, mmax: int):
    """Moments  int (w+delta)^m k(w) dw,  m = 0..mmax, over [wlo, whi].

    k(w) = sgn(w)|w|^(-2a) for the odd kernel, |w|^(-2a) for the even one.
    All arguments broadcast; returns array with leading axis m.
    """
    delta, wlo, whi = np.broadcast_arrays(delta, wlo, whi)
    gl = [None] * (mmax + 1)
    for p in range(mmax + 1):
        beta = p + 1 - two_alpha
        # integrand w^p k(w) = sgn(w)^q |w|^(p-2a); it carries a sign factor
        # exactly when q = p + (1 if odd_kernel else 0) is odd
        has_sign = (p % 2 == 0) if odd_kernel else (p % 2 == 1)
        gl[p] = (_pow_antider(whi, beta, signed=not has_sign)
                 - _pow_antider(wlo, beta, signed=not has_sign))
    out = np.empty((mmax + 1,) + delta.shape)
    for m in range(mmax + 1):
        acc = np.zeros(delta.shape)
        for p in range(m + 1):
            acc += comb(m, p) * delta ** (m - p) * gl[p]
        out[m] = acc
    return out


@lru_cache(maxsize=32)
def _leggauss(q: int):
    z, w = np.polynomial.legendre.leggauss(q)
    return 0.5 * (z + 1.0), 0.5 * w    # on [0, 1]


# --------------------------------------------------------------------------
# P1 / U assembly
# --------------------------------------------------------------------------

def _density_kernel_row_moments(x_rows, mesh, two_alpha, odd_kernel, parity):
    """Per (row, cell) moments I_m of the kernel folded with the reflection.

    Returns array (4, R, n-1); kernel is k(x - xi) -+ k(x + xi) with the
    sign set by the density parity (odd: minus, even: plus).
    """
    xs = np.asarray(x_rows)[:, None]
    l = mesh.nodes[:-1][None, :]
    r = mesh.nodes[1:][None, :]
    h = (r - l)
    sign_refl = -1.0 if parity == "odd" else 1.0
    zq, wq = _leggauss(GL_BULK)
    xi_q = (l[..., None] + h[..., None] * zq)[0]          # (C, q), row-independent
    base = (xi_q - l[0][:, None])                          # (C, q)
    basis = np.stack([np.ones_like(base), base, base**2, base**3])

    # direct part: w = xi - x on [l-x, r-x]; k1(x-xi) = -sgn(w)|w|^-2a
    w = xi_q[None] - xs[..., None]
    kern = np.abs(w) ** (-two_alpha)
    if odd_kernel:
        kern = -np.sign(w) * kern
    I = np.einsum("rcq,mcq,q->mrc", kern, basis, wq) * h
    near = np.minimum(np.abs(l - xs), np.abs(r - xs)) <= FAR_SWITCH * h
    ri, ci = np.nonzero(near)
    if ri.size:
        direct = _power_kernel_moments(xs[ri, 0] - l[0, ci], l[0, ci] - xs[ri, 0],
                                       r[0, ci] - xs[ri, 0], two_alpha, odd_kernel, 3)
        if odd_kernel:
            direct = -direct
        I[:, ri, ci] = direct

    # reflected part: w = xi + x on [l+x, r+x] (always >= 0);
    # k1(x+xi) = |w|^-2a = kU(x+xi)
    w = xi_q[None] + xs[..., None]
    kern = np.abs(w) ** (-two_alpha)
    Iref = np.einsum("rcq,mcq,q->mrc", kern, basis, wq) * h
    near_r = (l + xs) <= FAR_SWITCH * h
    ri, ci = np.nonzero(near_r)
    if ri.size:
        refl = _power_kernel_moments(-(xs[ri, 0] + l[0, ci]), l[0, ci] + xs[ri, 0],
                                     r[0, ci] + xs[ri, 0], two_alpha, odd_kernel, 3)
        Iref[:, ri, ci] = refl

    return I + sign_refl * Iref


def _assemble_density_operator(mesh, alpha, const, two_alpha, odd_kernel, parity,
                               op_kind) -> OperatorMatrix:
    n = mesh.n
    x = mesh.nodes
    h = np.diff(x)
    S = spline_derivative_matrix(mesh)
    M = np.empty((n, n))
    block = max(1, int(2**22 // max(n, 1)))
    for i0 in range(0, n, block):
        i1 = min(i0 + block, n)
        I = _density_kernel_row_moments(x[i0:i1], mesh, two_alpha, odd_kernel, parity)
        B = i1 - i0
        Fp = np.zeros((B, n))
        Dp = np.zeros((B, n))
        Fp[:, :-1] += I[0] - (3 / h**2) * I[2] + (2 / h**3) * I[3]
        Fp[:, 1:] += (3 / h**2) * I[2] - (2 / h**3) * I[3]
        Dp[:, :-1] += I[1] - (2 / h) * I[2] + (1 / h**2) * I[3]
        Dp[:, 1:] += -(1 / h) * I[2] + (1 / h**2) * I[3]
        M[i0:i1] = Fp + Dp @ S
    M *= const
    # the kernel fold cancels identically at x = 0 when kernel parity and
    # density parity differ; enforce the exact zero row
    if odd_kernel != (parity == "odd"):
        M[0, :] = 0.0
    if not np.all(np.isfinite(M)):
        raise AssemblyError(f"non-finite weights in {op_kind}")
    return OperatorMatrix(M, op_kind, mesh, alpha, parity)


def assemble_p1(mesh: Mesh, params: AlphaParams, parity: str = "odd") -> OperatorMatrix:
    """Velocity-gradient operator c1 PV int w(xi) (x-xi)/|x-xi|^(1+2a) dxi.

    Input samples live on [0, x_{n-1}] and are extended to the full line
    with the given parity (the solver's densities w = -x f are odd); the
    density is treated as zero beyond the truncation.
    """
    if parity not in ("odd", "even"):
        raise DomainError("parity must be 'odd' or 'even'")
    return _assemble_density_operator(mesh, params.alpha, params.c1, 2 * params.alpha,
                                      True, parity, OpKind.P1_FULL_PLANE)


def assemble_u_hp(mesh: Mesh, params: AlphaParams, parity: str = "odd") -> OperatorMatrix:
    """Half-plane velocity U(x) = (2 c0 / (-2a)) int theta(xi)/|x-xi|^(2a) dxi.

    The constant carries the factor 2 of the boundary-trace reduction (the
    profile system's convention), so that b(f) = -U'(0) on theta = xi f.
    """
    if parity not in ("odd", "even"):
        raise DomainError("parity must be 'odd' or 'even'")
    if not params.alpha < 0.5:
        raise DomainError("half-plane velocity operator needs alpha < 1/2")
    const = 2.0 * params.c0 / (-2.0 * params.alpha)
    return _assemble_density_operator(mesh, params.alpha, const, 2 * params.alpha,
                                      False, parity, OpKind.U_HALF_PLANE)


# --------------------------------------------------------------------------
# T operators (F1 form): T(f)(x) = const * int f'(xi) xi^(1+g) F1_g(x/xi) dxi
# --------------------------------------------------------------------------

def _t_kernel(gamma, x, xi):
    """xi^(1+g) F1_g(x/xi), stable in every regime."""
    return xi ** (1.0 + gamma) * sf.f1(gamma, x / xi)


def _t_sing_moments(gamma, x, a, b, l):
    """Exact moments of the nonsmooth kernel part over [a, b] against
    (xi-l)^m, m = 0..2.

    gamma != 0:  K_sing = sgn(w)|w|^(1+g) ((1+g) xi + x)/(g(1+g)(2+g)x)
    gamma == 0:  K_sing = w (w + 2x) log|w| / (2x),          w = xi - x.
    """
    from math import comb
    x, a, b, l = np.broadcast_arrays(x, a, b, l)
    delta = x - l
    wlo = a - x
    whi = b - x
    out = np.empty((3,) + x.shape)
    if abs(gamma) < sf.GAMMA_ZERO_TOL:
        # moments of w^q log|w|
        def logmom(q):
            def anti(w):
                aw = np.abs(w)
                with np.errstate(divide="ignore", invalid="ignore"):
                    val = w**(q + 1) * (np.log(aw) / (q + 1) - 1.0 / (q + 1) ** 2)
                return np.where(w == 0.0, 0.0, val)
            return anti(whi) - anti(wlo)
        lm = [logmom(q) for q in range(5)]
        for m in range(3):
            acc = np.zeros(x.shape)
            for p in range(m + 1):
                c = comb(m, p) * delta ** (m - p)
                # (w + 2x) w * w^p = w^(p+2) + 2x w^(p+1)
                acc += c * (lm[p + 2] + 2 * x * lm[p + 1])
            out[m] = acc / (2 * x)
        return out
    # gamma != 0: moments of sgn(w)|w|^(1+g) w^q
    def smom(q):
        beta = q + 2 + gamma
        signed_integrand_has_sgn = (q % 2 == 0)   # sgn(w)^(q+1)|w|^(q+1+g)
        return (_pow_antider(whi, beta, signed=not signed_integrand_has_sgn)
                - _pow_antider(wlo, beta, signed=not signed_integrand_has_sgn))
    sm = [smom(q) for q in range(4)]
    denom = gamma * (1 + gamma) * (2 + gamma) * x
    for m in range(3):
        acc = np.zeros(x.shape)
        for p in range(m + 1):
            c = comb(m, p) * delta ** (m - p)
            acc += c * ((1 + gamma) * sm[p + 1] + (2 + gamma) * x * sm[p])
        out[m] = acc / denom
    return out


def _t_reg_kernel(gamma, x, xi):
    """K - K_sing: analytic across xi = x."""
    t = x / xi
    if abs(gamma) < sf.GAMMA_ZERO_TOL:
        return xi - (xi**2 - x**2) / (2 * x) * np.log(xi + x)
    g = gamma
    f1mn = ((2 * g * (2 + g) * t - (1 + g - t) * (1 + t) * (1 + t) ** g)
            / (g * (1 + g) * (2 + g) * t))
    return xi ** (1.0 + g) * f1mn


def _t_origin_series_moments(gamma, x, b, mmax=2):
    """Moments over [0, b] (b <= 0.62 x) of the kernel's origin expansion
    against xi^m:  K = (2/(1+g)) xi^(1+g) + sum_k d_k x^(1+g-k) xi^k."""
    x, b = np.broadcast_arrays(x, b)
    d = sf.f1_far_coeffs(gamma)
    out = np.empty((mmax + 1,) + x.shape)
    s = b / x
    for m in range(mmax + 1):
        acc = (2.0 / (1.0 + gamma)) * b ** (m + 2 + gamma) / (m + 2 + gamma) * x ** 0.0
        tail = np.zeros(x.shape)
        # sum_k d_k x^(1+g-k) b^(k+m+1)/(k+m+1) = x^(2+g+m) sum d_k s^(k+m+1)/(k+m+1)
        for k in range(3, d.size, 2):
            if d[k] == 0.0:
                continue
            tail += d[k] * s ** (k + m + 1) / (k + m + 1)
        out[m] = acc + x ** (2 + gamma + m) * tail
    return out


def _t_cell_moments_bulk(gamma, xs, l, r):
    """GL moments of (xi-l)^m K(xi), m = 0..2, over each (row, cell)."""
    h = r - l
    zq, wq = _leggauss(GL_BULK)
    xi_q = l[..., None] + h[..., None] * zq
    K = _t_kernel(gamma, np.asarray(xs)[..., None], xi_q)
    base = xi_q - l[..., None]
    return np.stack([np.einsum("...q,q->...", K * base**m, wq) * h for m in range(3)])


def _t_cell_moments_diag(gamma, xs, l, r):
    """Decomposed moments: exact K_sing + GL of the analytic remainder."""
    h = r - l
    zq, wq = _leggauss(GL_DIAG)
    xi_q = l[..., None] + h[..., None] * zq
    Kreg = _t_reg_kernel(gamma, xs[..., None], xi_q)
    base = xi_q - l[..., None]
    out = _t_sing_moments(gamma, xs, l, r, l)
    for m in range(3):
        out[m] += np.einsum("...q,q->...", Kreg * base**m, wq) * h
    return out


def _assemble_t_operator(mesh, alpha, gamma, const, op_kind) -> OperatorMatrix:
    n = mesh.n
    x = mesh.nodes
    h = np.diff(x)
    S = spline_derivative_matrix(mesh)
    M = np.empty((n, n))
    l_all = x[:-1]
    r_all = x[1:]
    block = max(1, int(2**21 // max(n, 1)))
    for i0 in range(0, n, block):
        i1 = min(i0 + block, n)
        xs = x[i0:i1][:, None]
        J = _t_cell_moments_bulk(gamma, xs, l_all[None, :], r_all[None, :])

        # diagonal window: cells j = i-4 .. i+3 via the exact decomposition
        rows = np.arange(i0, i1)
        for off in range(-DIAG_CELLS_BACK, DIAG_CELLS_FWD + 1):
            j = rows + off
            ok = (j >= 1) & (j <= n - 2) & (rows >= 1)
            if not np.any(ok):
                continue
            jj = j[ok]
            Jd = _t_cell_moments_diag(gamma, x[rows[ok]], l_all[jj], r_all[jj])
            J[:, rows[ok] - i0, jj] = Jd

        # first cell [0, x_1]: origin series for rows >= 2; split for row 1
        if n >= 3:
            ok = rows >= 2
            if np.any(ok):
                J[:, ok, 0] = _t_origin_series_moments(gamma, x[rows[ok]],
                                                       np.full(ok.sum(), x[1]))
            if i0 <= 1 < i1:
                bsplit = 0.6 * x[1]
                left = _t_origin_series_moments(gamma, np.array([x[1]]),
                                                np.array([bsplit]))
                xi1 = np.array([x[1]])
                right = _t_sing_moments(gamma, xi1, np.array([bsplit]), xi1,
                                        np.array([0.0]))
                zq, wq = _leggauss(GL_DIAG)
                xi_q = bsplit + (x[1] - bsplit) * zq
                Kreg = _t_reg_kernel(gamma, x[1], xi_q)
                for m in range(3):
                    right[m] += np.sum(Kreg * xi_q**m * wq) * (x[1] - bsplit)
                J[:, 1 - i0, 0] = (left + right)[:, 0]
        if i0 == 0:
            J[:, 0, :] = 0.0   # T(f)(0) = 0 identically

        B = i1 - i0
        Fp = np.zeros((B, n))
        Dp = np.zeros((B, n))
        # f'(xi) = a1 + 2 a2 (xi-l) + 3 a3 (xi-l)^2 on each cell
        Fp[:, :-1] += -(6 / h**2) * J[1] + (6 / h**3) * J[2]
        Fp[:, 1:] += (6 / h**2) * J[1] - (6 / h**3) * J[2]
        Dp[:, :-1] += J[0] - (4 / h) * J[1] + (3 / h**2) * J[2]
        Dp[:, 1:] += -(2 / h) * J[1] + (3 / h**2) * J[2]
        M[i0:i1] = Fp + Dp @ S
    M *= const
    M[0, :] = 0.0
    if not np.all(np.isfinite(M)):
        raise AssemblyError(f"non-finite weights in {op_kind}")
    return OperatorMatrix(M, op_kind, mesh, alpha, "even")


def assemble_T_f1form(mesh: Mesh, params: AlphaParams, which: str) -> OperatorMatrix:
    """Velocity-gradient map acting on the even profile f.

    which = "full_plane": T(f)(x) = c1 int f' xi^(2-2a) F1_{1-2a}(x/xi) dxi
    which = "half_plane": T(f)(x) = -2 c0 int f' xi^(1-2a) F1_{-2a}(x/xi) dxi
    """
    if which == "full_plane":
        return _assemble_t_operator(mesh, params.alpha, params.gamma_r2, params.c1,
                                    OpKind.T_FULL_PLANE_F1FORM)
    if which == "half_plane":
        if not params.alpha < 0.5:
            raise DomainError("half-plane T operator needs alpha < 1/2")
        return _assemble_t_operator(mesh, params.alpha, params.gamma_hp, -2.0 * params.c0,
                                    OpKind.T_HALF_PLANE_F1FORM)
    raise DomainError(f"unknown T-operator flavor {which!r}")


# --------------------------------------------------------------------------
# weight vectors for the scalar functionals:  v . g  ~  int_0^X s_g(xi) xi^beta dxi
# --------------------------------------------------------------------------

_WEIGHT_CACHE: dict[tuple, np.ndarray] = {}
_NEXACT = 8     # leading cells integrated by exact power moments


def power_weight_vector(mesh: Mesh, beta: float) -> np.ndarray:
    """Weights v with v . g = int_0^{x_{n-1}} s_g(xi) xi^beta dxi.

    s_g is the not-a-knot spline of the samples g.  For beta <= -1 the
    integral only converges for densities vanishing quadratically at 0 (the
    solvers integrate 1 - f there); the first cell then uses the even
    quadratic model g(xi) ~ g(x_1) (xi/x_1)^2, so v[0] = 0 and the density
    sample at the origin must be 0.
    """
    key = _mesh_key(mesh) + (float(beta),)
    if key in _WEIGHT_CACHE:
        return _WEIGHT_CACHE[key]
    n = mesh.n
    x = mesh.nodes
    l, r = x[:-1], x[1:]
    h = r - l
    P = np.zeros((4, n - 1))
    start = 0
    if beta <= -1.0:
        start = 1
    # exact moments about the origin for the leading cells
    for j in range(start, min(_NEXACT, n - 1)):
        for m in range(4):
            acc = 0.0
            for p in range(m + 1):
                e = p + beta + 1
                if e == 0.0:
                    piece = np.log(r[j] / l[j])
                else:
                    piece = (r[j] ** e - l[j] ** e) / e
                acc += comb(m, p) * (-l[j]) ** (m - p) * piece
            P[m, j] = acc
    zq, wq = _leggauss(GL_BULK)
    sel = np.arange(min(_NEXACT, n - 1), n - 1)
    xi_q = l[sel, None] + h[sel, None] * zq
    kern = xi_q ** beta
    base = xi_q - l[sel, None]
    for m in range(4):
        P[m, sel] = np.einsum("cq,q->c", kern * base**m, wq) * h[sel]
    F = np.zeros(n)
    D = np.zeros(n)
    F[:-1] += P[0] - (3 / h**2) * P[2] + (2 / h**3) * P[3]
    F[1:] += (3 / h**2) * P[2] - (2 / h**3) * P[3]
    D[:-1] += P[1] - (2 / h) * P[2] + (1 / h**2) * P[3]
    D[1:] += -(1 / h) * P[2] + (1 / h**2) * P[3]
    v = F + spline_derivative_matrix(mesh).T @ D
    if beta <= -1.0:
        # even quadratic model on the first cell: contribution g(x_1) x_1^(beta+1)/(beta+3)
        v[0] = 0.0
        v[1] += x[1] ** (beta + 1) / (beta + 3)
    _WEIGHT_CACHE[key] = v
    return v


# --------------------------------------------------------------------------
# support-kink correction for T applications
#
# The assembled matrix differentiates the global not-a-knot spline.  When a
# full-plane iterate has been clipped by max(0, .), its samples vanish
# beyond the support cut and the global spline rings there; the correction
# re-integrates a window of cells around the cut against a spline built on
# the nodes up to the cut (zero beyond), as if the cut were a breakpoint.
# --------------------------------------------------------------------------

KINK_WINDOW_BACK = 7
KINK_WINDOW_FWD = 8


def t_kink_correction(op: OperatorMatrix, f: np.ndarray, support_idx: int,
                      params: AlphaParams) -> np.ndarray:
    mesh = op.mesh
    n = mesh.n
    s = int(support_idx)
    if s >= n - 2 or s < 4:
        return np.zeros(n)
    x = mesh.nodes
    gamma = params.gamma_r2 if op.op_kind == OpKind.T_FULL_PLANE_F1FORM else params.gamma_hp
    const = params.c1 if op.op_kind == OpKind.T_FULL_PLANE_F1FORM else -2.0 * params.c0

    cells = np.arange(max(1, s - KINK_WINDOW_BACK), min(n - 1, s + KINK_WINDOW_FWD))
    # global spline cell coefficients
    S = spline_derivative_matrix(mesh)
    d_glob = S @ f
    a0g, a1g, a2g, a3g = hermite_cell_coeffs(x, f, d_glob)
    # kink-aware: not-a-knot spline on nodes 0..s+1 (f_{s+1} = 0), zero after
    cut = s + 1
    spl = CubicSpline(x[: cut + 1], f[: cut + 1], bc_type="not-a-knot")
    dk = np.zeros(n)
    dk[: cut + 1] = spl(x[: cut + 1], 1)
    fk = np.zeros(n)
    fk[: cut + 1] = f[: cut + 1]
    a0k, a1k, a2k, a3k = hermite_cell_coeffs(x, fk, dk)
    a1k[cut:] = a2k[cut:] = a3k[cut:] = 0.0

    # moment integrals of the window cells for every row
    xs = x[:, None]
    l = x[cells][None, :]
    r = x[cells + 1][None, :]
    h = (r - l)
    J = _t_cell_moments_bulk(gamma, xs, l, r)
    dist = np.maximum(l - xs, xs - r)
    diag = dist <= 3.0 * np.maximum(h, 0)
    if np.any(diag):
        ri, ci = np.nonzero(diag)
        Jd = _t_cell_moments_diag(gamma, x[ri], x[cells[ci]], x[cells[ci] + 1])
        J[:, ri, ci] = Jd
    J[:, 0, :] = 0.0

    # f' coefficients: b0 = a1, b1 = 2 a2, b2 = 3 a3
    db0 = a1k[cells] - a1g[cells]
    db1 = 2 * (a2k[cells] - a2g[cells])
    db2 = 3 * (a3k[cells] - a3g[cells])
    corr = J[0] @ db0 + J[1] @ db1 + J[2] @ db2
    return const * corr
