"""Stable evaluation of the auxiliary kernel functions F1 and F2.

For gamma in (-1, 1) these are the functions appearing after integration by
parts in the half-line form of the velocity-gradient operators:

    F1(t) = [2 g (2+g) t - (1+g-t)(1+t)|1+t|^g + (1-t)(1+g+t)|1-t|^g]
            / (g (1+g) (2+g) t),                                g != 0,
    F1(t) = 1 - (1-t^2)/(2t) * log|(t+1)/(t-1)|,                g == 0,

with F2 defined by the first-order ODE

    t F2'(t) - (1+g) F2(t) = F1'(t)/t - 2(2-g)/3 .

The closed forms lose all digits to cancellation as t -> 0 (and the large-t
limits hide under O(t^(2+g)) terms), so evaluation is split into three
regimes:

    t < T_SERIES   Taylor series in t^2,
    mid range      closed forms with the nonsmooth factor |1-t|^(1+g)
                   grouped first,
    t > T_ASYM     expansion of the closed form about s = 1/t
                   (values of F1, F2); derivatives use the reflection
                   identities F1'(1/t) = t^(2-g) F1'(t),
                   F2'(1/t) = t^(4-g) F2'(t) to map onto t < 1.

All four functions vanish at t = 0.  F1 and F2 are finite and continuous on
[0, inf) for every gamma.  The derivatives F1' and F2' are finite at t = 1
only for gamma > 0; for gamma <= 0 they diverge (integrably) there and
evaluation returns +inf at exactly t = 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

# The Taylor series converges on t < 1 and is machine-accurate wherever its
# terms decay fast enough, while the closed forms lose ~t^-2 .. t^-4 digits
# of cancellation as t -> 0, so the switch sits at 0.5 rather than at the
# edge of series convergence.
T_SERIES = 0.5
T_ASYM = 1e2
GAMMA_ZERO_TOL = 1e-8


def _check_gamma(gamma: float) -> float:
    gamma = float(gamma)
    if not (-1.0 < gamma < 1.0) or not np.isfinite(gamma):
        raise DomainError(f"gamma must lie in (-1, 1), got {gamma}")
    return gamma


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise DomainError("t must be finite and nonnegative")
    return t


# --------------------------------------------------------------------------
# series coefficients
#
# gamma^{-1} C(gamma, 2k-1) = prod_{j=1}^{2k-2} (gamma - j) / (2k-1)!  is
# well defined at gamma = 0 (limit 1/(2k-1)), so a single coefficient
# routine covers the gamma = 0 branch of every series.
# --------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _binom_ratio(gamma: float, kmax: int) -> np.ndarray:
    """gamma^{-1} C(gamma, 2k-1) = prod_{j=1}^{2k-2}(gamma-j)/(2k-1)!  for k = 1..kmax."""
    out = np.empty(kmax)
    val = 1.0
    out[0] = val
    for k in range(2, kmax + 1):
        val *= (gamma - (2 * k - 3)) * (gamma - (2 * k - 2)) / ((2 * k - 2) * (2 * k - 1))
        out[k - 1] = val
    return out


@lru_cache(maxsize=256)
def small_series_coeffs(gamma: float, which: str, kmax: int = 40) -> np.ndarray:
    """Taylor coefficients a_k, k = 1..kmax, of the small-t series.

    f1:       F1(t)  = sum a_k t^(2k)
    f1prime:  F1'(t) = sum a_k t^(2k-1)
    f2:       F2(t)  = sum a_k t^(2k)
    f2prime:  F2'(t) = sum a_k t^(2k-1)
    """
    base = _binom_ratio(gamma, kmax)
    k = np.arange(1, kmax + 1, dtype=float)
    if which == "f1":
        return base * (2 * k - gamma) / (k * (2 * k + 1))
    if which == "f1prime":
        return base * 2 * (2 * k - gamma) / (2 * k + 1)
    if which == "f2":
        return base * (2 * k - gamma) * (2 * k + 2 - gamma) / (k * (2 * k + 1) * (2 * k + 3))
    if which == "f2prime":
        return base * 2 * (2 * k - gamma) * (2 * k + 2 - gamma) / ((2 * k + 1) * (2 * k + 3))
    raise ValueError(which)


def _eval_even_series(coeffs: np.ndarray, t: np.ndarray, odd_power: bool) -> np.ndarray:
    """sum coeffs[k-1] * t^(2k)  (or t^(2k-1) when odd_power)."""
    t2 = t * t
    acc = np.zeros_like(t)
    for c in coeffs[::-1]:
        acc = acc * t2 + c
    acc *= t2
    if odd_power:
        acc /= np.where(t > 0, t, 1.0)
        acc = np.where(t > 0, acc, 0.0)
    return acc


@lru_cache(maxsize=256)
def f1_far_coeffs(gamma: float, kmax: int = 80) -> np.ndarray:
    """Coefficients d_k (odd k >= 3) with F1(t) = 2/(1+g) + t^(1+g) sum d_k t^(-k).

    d_k = 2 (1-k) prod_{j=1}^{k-3} (gamma - j) / (k * (k-1)!); returned as a
    dense array indexed by k (entries at even k are zero).
    """
    d = np.zeros(kmax + 1)
    prod_over_fact = 1.0 / 2.0          # prod_{j=1}^{0}(g-j) / (3-1)! = 1/2
    for k in range(3, kmax + 1, 2):
        d[k] = 2.0 * (1 - k) / k * prod_over_fact
        # advance the product/factorial from k to k+2
        prod_over_fact *= (gamma - (k - 2)) * (gamma - (k - 1)) / (k * (k + 1))
    return d


@lru_cache(maxsize=256)
def f2_far_coeffs(gamma: float, kmax: int = 80) -> np.ndarray:
    """Coefficients e_k (odd k >= 3) with F2(t) = 2(2-g)/(3(1+g)) + t^(1+g) sum e_k t^(-k).

    Assembled from the binomial expansions of |1 -+ 1/t|^gamma in the closed
    form; the 1/gamma prefactor is removed analytically so gamma = 0 works.
    """
    g = gamma
    P, Q = 1.0 + g, 2.0 + g - g * g
    n = kmax + 5
    # q_k = prod_{j=1}^{k-1}(g-j)/k!  so that C(g,k)/g = q_k and C(g,k) = g q_k
    q = np.zeros(n)
    val = 1.0
    for k in range(1, n):
        val /= k
        if k > 1:
            val *= g - (k - 1)
        q[k] = val
    c_odd = np.where(np.arange(n) % 2 == 1, q, 0.0)
    c_even = g * np.where((np.arange(n) % 2 == 0) & (np.arange(n) > 0), q, 0.0)
    c_even[0] = 1.0
    # W(s)/g = (1 - Q s^2/3 - P s^4/3) sum_odd q_k s^k - (s - P s^3/3) sum_even C(g,k) s^k
    w = np.zeros(n + 5)
    w[:n] += c_odd
    w[2 : 2 + n] -= (Q / 3.0) * c_odd
    w[4 : 4 + n] -= (P / 3.0) * c_odd
    w[1 : 1 + n] -= c_even
    w[3 : 3 + n] += (P / 3.0) * c_even
    scale = 6.0 / (P * (2.0 + g) * (4.0 + g))
    return scale * w[: kmax + 1]


def _eval_far_series(coeffs: np.ndarray, gamma: float, t: np.ndarray, limit: float) -> np.ndarray:
    s = 1.0 / t
    acc = np.zeros_like(t)
    for c in coeffs[::-1]:
        acc = acc * s + c
    return limit + t ** (1.0 + gamma) * acc


# --------------------------------------------------------------------------
# closed forms on the mid range
#
# For t < 1 the pair |1-t|^g, |1+t|^g is rewritten through
#     M = (1-t^2)^(g/2),  a = atanh(t),
#     |1-t|^g - |1+t|^g = -2 M sinh(g a),   |1-t|^g + |1+t|^g = 2 M cosh(g a),
# which removes the leading stage of cancellation against the polynomial
# terms.  For t >= 1 the nonsmooth factor is grouped as |1-t|^(1+g) so the
# values stay finite through t = 1 for every gamma.
# --------------------------------------------------------------------------

def _msinh_mcosh(gamma: float, t: np.ndarray):
    m = (1.0 - t * t) ** (gamma / 2.0)
    a = gamma * np.arctanh(t)
    return m * np.sinh(a), m * np.cosh(a)


def _f1_closed(gamma: float, t: np.ndarray) -> np.ndarray:
    g = gamma
    if abs(g) < GAMMA_ZERO_TOL:
        with np.errstate(divide="ignore", invalid="ignore"):
            val = 1.0 - (1.0 - t * t) / (2.0 * t) * (np.log1p(t) - np.log(np.abs(1.0 - t)))
        return np.where(t == 1.0, 1.0, val)
    lo = t < 1.0
    out = np.empty_like(t)
    if np.any(lo):
        tl = t[lo]
        ms, mc = _msinh_mcosh(g, tl)
        num = 2 * g * (2 + g) * tl - 2 * (g * tl * mc + (1 + g - tl * tl) * ms)
        out[lo] = num / (g * (1 + g) * (2 + g) * tl)
    hi = ~lo
    if np.any(hi):
        th = t[hi]
        num = (2 * g * (2 + g) * th
               - (1 + g - th) * (1 + th) * (1 + th) ** g
               + np.sign(1.0 - th) * np.abs(1.0 - th) ** (1 + g) * (1 + g + th))
        out[hi] = num / (g * (1 + g) * (2 + g) * th)
    return out


def _f1p_closed(gamma: float, t: np.ndarray) -> np.ndarray:
    g = gamma
    if abs(g) < GAMMA_ZERO_TOL:
        with np.errstate(divide="ignore", invalid="ignore"):
            val = -1.0 / t + (t * t + 1.0) / (2.0 * t * t) * (np.log1p(t) - np.log(np.abs(1.0 - t)))
        return np.where(t == 1.0, np.inf, val)
    lo = t < 1.0
    out = np.empty_like(t)
    if np.any(lo):
        tl = t[lo]
        ms, mc = _msinh_mcosh(g, tl)
        out[lo] = 2 * ((1 + tl * tl) * ms - g * tl * mc) / (g * (2 + g) * tl * tl)
    hi = ~lo
    if np.any(hi):
        th = t[hi]
        with np.errstate(divide="ignore", invalid="ignore"):
            am = np.abs(1.0 - th) ** g
            ap = (1.0 + th) ** g
            num = -((1 + th * th) * (am - ap) + g * th * (am + ap))
            val = num / (g * (2 + g) * th * th)
        if g < 0:
            val = np.where(th == 1.0, np.inf, val)
        out[hi] = val
    return out


def _f2_closed(gamma: float, t: np.ndarray) -> np.ndarray:
    g = gamma
    if abs(g) < GAMMA_ZERO_TOL:
        with np.errstate(divide="ignore", invalid="ignore"):
            logterm = np.log1p(t) - np.log(np.abs(1.0 - t))
            val = (14 * t**3 + 6 * t - 3 * (1 - t * t) * (1 + 3 * t * t) * logterm) / (24 * t**3)
        return np.where(t == 1.0, 5.0 / 6.0, val)
    lo = t < 1.0
    out = np.empty_like(t)
    if np.any(lo):
        tl = t[lo]
        ms, mc = _msinh_mcosh(g, tl)
        a_poly = 1 + g + (2 + g - g * g) * tl * tl - 3 * tl**4
        b_poly = g * (1 + g) * tl - 3 * g * tl**3
        num = 2 * g * (2 - g) * (2 + g) * (4 + g) * tl**3 - 6 * a_poly * ms + 6 * b_poly * mc
        out[lo] = num / (3 * g * (1 + g) * (2 + g) * (4 + g) * tl**3)
    hi = ~lo
    if np.any(hi):
        th = t[hi]
        # coefficient of |1-t|^g factored as (t-1) * cubic, so the product is
        # sgn(t-1)|1-t|^(1+g) * cubic and stays finite for g < 0
        cubic = 3 * th**3 + 3 * (1 + g) * th * th + (1 + g) ** 2 * th + (1 + g)
        minus_part = -3.0 * np.sign(th - 1.0) * np.abs(1.0 - th) ** (1 + g) * cubic
        plus_part = (-3 * (1 + g + (2 + g - g * g) * th * th - 3 * th**4)
                     + 3 * ((g + g * g) * th - 3 * g * th**3)) * (1 + th) ** g
        num = 2 * g * (2 - g) * (2 + g) * (4 + g) * th**3 + minus_part + plus_part
        out[hi] = num / (3 * g * (1 + g) * (2 + g) * (4 + g) * th**3)
    return out


def _f2p_closed(gamma: float, t: np.ndarray) -> np.ndarray:
    g = gamma
    if abs(g) < GAMMA_ZERO_TOL:
        with np.errstate(divide="ignore", invalid="ignore"):
            logterm = np.log1p(t) - np.log(np.abs(1.0 - t))
            val = ((3 + 2 * t * t + 3 * t**4) * logterm - 6 * t * (1 + t * t)) / (8 * t**4)
        return np.where(t == 1.0, np.inf, val)
    lo = t < 1.0
    out = np.empty_like(t)
    if np.any(lo):
        tl = t[lo]
        ms, mc = _msinh_mcosh(g, tl)
        num = 2 * ((3 + (2 + g * g) * tl * tl + 3 * tl**4) * ms - 3 * g * tl * (1 + tl * tl) * mc)
        out[lo] = num / (g * (2 + g) * (4 + g) * tl**4)
    hi = ~lo
    if np.any(hi):
        th = t[hi]
        with np.errstate(divide="ignore", invalid="ignore"):
            am = np.abs(1.0 - th) ** g
            ap = (1.0 + th) ** g
            num = -((3 + (2 + g * g) * th * th + 3 * th**4) * (am - ap)
                    + 3 * g * th * (1 + th * th) * (am + ap))
            val = num / (g * (2 + g) * (4 + g) * th**4)
        if g < 0:
            val = np.where(th == 1.0, np.inf, val)
        out[hi] = val
    return out


# --------------------------------------------------------------------------
# public API
# --------------------------------------------------------------------------

def _dispatch(gamma, t, closed, series_which, far):
    gamma = _check_gamma(gamma)
    t_in = _check_t(t)
    scalar = t_in.ndim == 0
    t = np.atleast_1d(t_in).astype(float)
    out = np.empty_like(t)

    small = t < T_SERIES
    if np.any(small):
        coeffs = small_series_coeffs(gamma, series_which)
        out[small] = _eval_even_series(coeffs, t[small], series_which.endswith("prime"))
    mid = ~small
    if far is None:
        # derivatives: reflect t > 1 onto 1/t
        mid &= t <= 1.0
        big = t > 1.0
        if np.any(big):
            tb = t[big]
            r = 1.0 / tb
            power = 2.0 - gamma if series_which == "f1prime" else 4.0 - gamma
            sub = np.where(r < T_SERIES,
                           _eval_even_series(small_series_coeffs(gamma, series_which), r, True),
                           closed(gamma, r))
            out[big] = tb ** (-power) * sub
    else:
        mid &= t <= T_ASYM
        big = t > T_ASYM
        if np.any(big):
            limit, coeff_fn = far
            out[big] = _eval_far_series(coeff_fn(gamma), gamma, t[big], limit(gamma))
    if np.any(mid):
        out[mid] = closed(gamma, t[mid])
    return out[0] if scalar else out.reshape(t_in.shape)


def f1(gamma: float, t) -> np.ndarray:
    """F1 at gamma in (-1,1), t >= 0; vectorized over t."""
    return _dispatch(gamma, t, _f1_closed, "f1",
                     (lambda g: 2.0 / (1.0 + g), f1_far_coeffs))


def f1_prime(gamma: float, t) -> np.ndarray:
    """dF1/dt; +inf at t = 1 when gamma <= 0."""
    return _dispatch(gamma, t, _f1p_closed, "f1prime", None)


def f2(gamma: float, t) -> np.ndarray:
    """F2 at gamma in (-1,1), t >= 0; vectorized over t."""
    return _dispatch(gamma, t, _f2_closed, "f2",
                     (lambda g: 2.0 * (2.0 - g) / (3.0 * (1.0 + g)), f2_far_coeffs))


def f2_prime(gamma: float, t) -> np.ndarray:
    """dF2/dt; +inf at t = 1 when gamma <= 0."""
    return _dispatch(gamma, t, _f2p_closed, "f2prime", None)


class Kind(enum.Enum):
    F1 = "f1"
    F1PRIME = "f1prime"
    F2 = "f2"
    F2PRIME = "f2prime"


_KIND_FN = {Kind.F1: f1, Kind.F1PRIME: f1_prime, Kind.F2: f2, Kind.F2PRIME: f2_prime}


@dataclass(frozen=True)
class KernelFn:
    """One of the four auxiliary functions, frozen at a given gamma."""

    gamma: float
    which: Kind

    def __post_init__(self):
        _check_gamma(self.gamma)

    def __call__(self, t):
        return _KIND_FN[self.which](self.gamma, t)
