"""Reference curves drawn over solver output, evaluated from closed forms
only (no solver output is reused): the lower barrier max(0, 1 - x^2), the
small-alpha sinc limit, the implicit Burgers profile solved per point by
bisection, and the focusing lower bound 1/(2 alpha)."""

from __future__ import annotations

import numpy as np


def barrier(x: np.ndarray) -> np.ndarray:
    return np.maximum(0.0, 1.0 - np.asarray(x) ** 2)


def sinc_limit(x: np.ndarray) -> np.ndarray:
    z = np.sqrt(6.0) * np.asarray(x, dtype=float)
    out = np.ones_like(z)
    nz = z != 0
    out[nz] = np.sin(z[nz]) / z[nz]
    return out


def burgers(x: np.ndarray, iters: int = 80) -> np.ndarray:
    """Monotone root F in (0, 1] of F + x^2 F^3 = 1, bisected per point.

    Bisection is used deliberately: an overlay independent of any Newton
    machinery in the solver gives a visual cross-check.
    """
    x = np.asarray(x, dtype=float)
    lo = np.zeros_like(x)
    hi = np.ones_like(x)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        low = mid + x * x * mid**3 < 1.0
        lo = np.where(low, mid, lo)
        hi = np.where(low, hi, mid)
    return 0.5 * (lo + hi)


def focusing_bound(alpha: np.ndarray) -> np.ndarray:
    return 1.0 / (2.0 * np.asarray(alpha, dtype=float))


REGISTRY = {
    "barrier": (barrier, "max(0, 1-x^2)"),
    "sinc": (sinc_limit, "sin(sqrt(6)x)/(sqrt(6)x)"),
    "burgers": (burgers, "Burgers profile"),
    "focusing_bound": (focusing_bound, "1/(2a)"),
}
