"""Alpha and every alpha-derived constant used by the solvers.

All constants are computed once at construction and shared read-only.  The
half-plane family additionally carries the threshold t0, the barrier
exponents delta_l / delta_u and the functional brackets (b_lo, b_hi, c_hi);
those exist only for alpha < 1/2.

t0 is found by doubling from 2 until both defining inequalities hold, and
enlarged further (jointly with the delta_l bisection) if the delta_l band
is empty at that t0.  Powers of 2 keep runs reproducible across platforms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, NoFeasibleT0

_SEARCH_CAP = 200


def gamma_ratio(z: float, a: float, b: float) -> float:
    """Gamma(z+a)/Gamma(z+b), stable for large z.

    Below z = 1e6 the gammaln difference is accurate; beyond that the
    difference of two huge values loses digits, so the Tricomi asymptotic
    z^(a-b) [1 + (a-b)(a+b-1)/(2z) + O(1/z^2)] takes over (its own error is
    below 1e-13 there).
    """
    if z <= 1e6:
        return math.exp(gammaln(z + a) - gammaln(z + b))
    return z ** (a - b) * (1.0 + (a - b) * (a + b - 1.0) / (2.0 * z))


@dataclass(frozen=True)
class AlphaParams:
    alpha: float
    gamma_r2: float          # 1 - 2*alpha, full-plane kernel exponent
    gamma_hp: float          # -2*alpha, half-plane kernel exponent
    c0: float                # 2^(2a-1) Gamma(1+a) / (pi Gamma(1-a))
    c1: float                # 2^(2a-1) Gamma(1/2+a) / (sqrt(pi) Gamma(1-a))
    eta: float               # slope threshold of the full-plane invariant set
    half_plane: bool
    c0_tp: float | None = None      # c0''' constant entering the t0 conditions
    t0: float | None = None
    delta_l: float | None = None
    delta_u: float | None = None
    b_lo: float | None = None       # b'_alpha
    b_hi: float | None = None       # b''_alpha
    c_hi: float | None = None       # c''_{0,alpha}

    def lower_barrier_hp(self, x) -> np.ndarray:
        """f_l(x) = (1 + t0^-2 x^2)^(-delta_l), evaluated without overflow."""
        x = np.asarray(x, dtype=float)
        return np.exp(-self.delta_l * np.log1p((x / self.t0) ** 2))

    def upper_barrier_hp(self, x) -> np.ndarray:
        """f_u(x) = min(1, (x/t0)^(-delta_u))."""
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            decay = np.exp(-self.delta_u * (np.log(np.where(x > 0, x, 1.0)) - math.log(self.t0)))
        return np.minimum(1.0, np.where(x > 0, decay, 1.0))


def _t0_conditions_hold(t0: float, alpha: float, c0_tp: float) -> bool:
    lhs1 = t0 ** (0.5 - alpha)
    rhs1 = max(1.0 / c0_tp, (1.0 - 2 * alpha) / (2 * alpha * c0_tp))
    lhs2 = t0 ** (0.5 + alpha)
    rhs2 = (2.0 ** (2.0**alpha + 2.0)
            * math.exp(gammaln(2 + alpha) + gammaln(0.5 - alpha) - gammaln(1 - alpha))
            / (3.0 * math.pi * alpha))
    return lhs1 > rhs1 and lhs2 > rhs2


def _delta_band(alpha: float) -> float:
    """Lower edge of the delta_l sandwich."""
    return (2.0**(2 * alpha)
            * math.exp(gammaln(2 + alpha) + gammaln(0.5 - alpha) - gammaln(1 - alpha))
            / (3.0 * math.pi))


def _delta_expr(delta: float, t0: float, alpha: float) -> float:
    return gamma_ratio(delta, 1.0, alpha + 0.5) * t0 ** (2 * alpha - 1)


def _search_t0_delta_l(alpha: float, c0_tp: float) -> tuple[float, float]:
    t0 = 2.0
    for _ in range(_SEARCH_CAP):
        if _t0_conditions_hold(t0, alpha, c0_tp):
            break
        t0 *= 2.0
    else:
        raise NoFeasibleT0(f"t0 doubling search failed at alpha={alpha}")

    lo_band = _delta_band(alpha)
    for _ in range(_SEARCH_CAP):
        # the band expression is increasing in delta (alpha < 1/2) and
        # decreasing in t0, so enlarge t0 while even delta = 1/2 overshoots
        if _delta_expr(0.5, t0, alpha) > 2.0 * lo_band:
            t0 *= 2.0
            continue
        if _delta_expr(0.5, t0, alpha) >= lo_band:
            return t0, 0.5
        # bisect for the midpoint of the band
        target = 1.5 * lo_band
        hi = 1.0
        for _ in range(_SEARCH_CAP):
            if _delta_expr(hi, t0, alpha) >= target:
                break
            hi *= 2.0
        else:
            raise NoFeasibleT0(f"delta_l bracket search failed at alpha={alpha}")
        lo = 0.5
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if _delta_expr(mid, t0, alpha) < target:
                lo = mid
            else:
                hi = mid
        delta_l = 0.5 * (lo + hi)
        val = _delta_expr(delta_l, t0, alpha)
        if lo_band <= val <= 2.0 * lo_band:
            return t0, delta_l
        t0 *= 2.0
    raise NoFeasibleT0(f"joint (t0, delta_l) search failed at alpha={alpha}")


def make_alpha_params(alpha: float, half_plane: bool = False) -> AlphaParams:
    """Build every alpha-derived constant; half_plane requires alpha < 1/2."""
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    if half_plane and not alpha < 0.5:
        raise DomainError(f"half-plane model requires alpha in (0, 1/2), got {alpha}")

    c0 = (2.0 ** (2 * alpha - 1)
          * math.exp(gammaln(1 + alpha) - gammaln(1 - alpha)) / math.pi)
    c1 = (2.0 ** (2 * alpha - 1)
          * math.exp(gammaln(0.5 + alpha) - gammaln(1 - alpha)) / math.sqrt(math.pi))
    inner = 3.0 / (2.0 * (3 - 2 * alpha) * (5 - 2 * alpha) * (1 + 4.0**alpha))
    eta = 2.0 * inner ** (1.0 / min(alpha, 1 - alpha))
    if not (0.0 < eta <= 1.0):
        # the seed profile max(0, 1-x^2) has slope -1 at x = 1/2, so the
        # invariant-set machinery needs eta <= 1
        raise DomainError(f"eta = {eta} outside (0, 1] at alpha={alpha}")

    if not half_plane:
        return AlphaParams(alpha=alpha, gamma_r2=1 - 2 * alpha, gamma_hp=-2 * alpha,
                           c0=c0, c1=c1, eta=eta, half_plane=False)

    c0_tp = ((4.0 ** (1 + alpha) - 4 + alpha - 4 * alpha**3)
             * math.exp(gammaln(alpha) - gammaln(2 - alpha))
             / (2 * math.pi * alpha * (5 - 2 * alpha) * (3 - 2 * alpha) * (1 - 2 * alpha)))
    t0, delta_l = _search_t0_delta_l(alpha, c0_tp)
    if not _t0_conditions_hold(t0, alpha, c0_tp):
        raise NoFeasibleT0(f"stored t0 violates its defining inequalities at alpha={alpha}")

    du_arg = c0_tp * t0 ** (0.5 - alpha)
    delta_u = du_arg / (1.0 + du_arg)
    if not (1 - 2 * alpha < delta_u < 1.0):
        raise NoFeasibleT0(f"delta_u = {delta_u} outside (1-2*alpha, 1) at alpha={alpha}")

    b_lo = (2 * c0 * t0 ** (1 - 2 * alpha) * math.exp(gammaln(0.5 - alpha))
            * gamma_ratio(delta_l, alpha - 0.5, 0.0))
    b_hi = (4 * c0 * t0 ** (1 - 2 * alpha)
            * (1.0 / (1 - 2 * alpha) + 1.0 / (delta_u + 2 * alpha - 1)))
    c_hi = (c0 * t0 ** (-1 - 2 * alpha) * 8 * (1 + alpha) / 3.0
            * math.exp(gammaln(0.5 - alpha)) * gamma_ratio(delta_l, alpha + 0.5, 0.0))

    return AlphaParams(alpha=alpha, gamma_r2=1 - 2 * alpha, gamma_hp=-2 * alpha,
                       c0=c0, c1=c1, eta=eta, half_plane=True,
                       c0_tp=c0_tp, t0=t0, delta_l=delta_l, delta_u=delta_u,
                       b_lo=b_lo, b_hi=b_hi, c_hi=c_hi)
