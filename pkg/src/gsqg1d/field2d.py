"""Half-plane 2D velocity evaluation by FFT convolution, desk scale.

The scalar lives on a uniform square grid covering [-L, L]^2 with the
odd-in-y reflection already applied (Dirichlet boundary on y = 0).  The
velocity is the discrete convolution of the reflected field with the
Biot-Savart kernels

    u1 = c0 * (Y / (X^2 + Y^2)^(1+a)) * theta,
    u2 = -c0 * (X / (X^2 + Y^2)^(1+a)) * theta,

computed on the zero-padded double grid via FFT.  The kernel cell at the
origin carries its analytic cell average, which vanishes by parity.  The
evaluation is forward-only; the iteration rule toward a 2D self-similar
candidate is not fixed here (the update is accepted as a caller-supplied
hook, see `iterate`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, GridError
from .params import AlphaParams

MEMORY_CAP_BYTES = 2 << 30


@dataclass
class Field2D:
    length: float                 # half-width L; grid covers [-L, L)^2
    n: int                        # nodes per direction, power of two
    theta: np.ndarray             # (n, n), indexed [iy, ix], odd in y
    u1: np.ndarray | None = None
    u2: np.ndarray | None = None

    @property
    def h(self) -> float:
        return 2.0 * self.length / self.n

    @property
    def xs(self) -> np.ndarray:
        return -self.length + self.h * np.arange(self.n)

    @property
    def ys(self) -> np.ndarray:
        return -self.length + self.h * np.arange(self.n)


def _check_grid(n: int, length: float, count: int = 6):
    if n < 4 or (n & (n - 1)) != 0:
        raise GridError(f"grid size must be a power of two, got {n}")
    if not length > 0:
        raise GridError("length must be positive")
    if count * (2 * n) ** 2 * 16 > MEMORY_CAP_BYTES:
        raise GridError(f"n = {n} exceeds the configured memory cap")


def make_field(length: float, n: int, upper_theta: Callable) -> Field2D:
    """Sample theta(x, y) on the upper half and enforce the odd reflection.

    The row y = -L has no mirror on the grid and is zeroed; fields should be
    supported well inside the square.
    """
    _check_grid(n, length)
    f = Field2D(float(length), int(n), np.zeros((n, n)))
    X, Y = np.meshgrid(f.xs, f.ys)
    upper = Y >= 0
    th = np.zeros((n, n))
    th[upper] = np.asarray(upper_theta(X[upper], Y[upper]), dtype=float)
    th = enforce_odd_in_y(th)
    f.theta = th
    return f


def enforce_odd_in_y(theta: np.ndarray) -> np.ndarray:
    """theta(x, -y) = -theta(x, y); the unpaired bottom row is zeroed."""
    n = theta.shape[0]
    out = theta.copy()
    half = n // 2
    rows = np.arange(1, half)               # y = -L + k h for k = 1..n/2-1
    out[rows, :] = -theta[n - rows, :]
    out[half, :] = theta[half, :]           # y = 0 row kept (should be ~0)
    out[0, :] = 0.0
    return out


def _kernel_tables(length: float, n: int, alpha: float):
    """Displacement kernels on the doubled grid, origin cell averaged (= 0)."""
    h = 2.0 * length / n
    m = 2 * n
    idx = np.arange(m)
    idx = np.where(idx < n, idx, idx - m)    # displacement indices, wrapped
    D = idx * h
    X, Y = np.meshgrid(D, D)
    R2 = X**2 + Y**2
    with np.errstate(divide="ignore", invalid="ignore"):
        G1 = Y / R2 ** (1 + alpha)
        G2 = X / R2 ** (1 + alpha)
    G1[0, 0] = 0.0                           # analytic cell average: odd kernels
    G2[0, 0] = 0.0
    return G1, G2


def velocity_from_theta(field: Field2D, params: AlphaParams) -> Field2D:
    """Fill u1, u2 by discrete convolution over the truncated square."""
    if not params.alpha < 0.5:
        raise DomainError("2D velocity evaluation needs alpha < 1/2")
    n = field.n
    _check_grid(n, field.length)
    theta = enforce_odd_in_y(field.theta)
    m = 2 * n
    pad = np.zeros((m, m))
    pad[:n, :n] = theta
    ft = np.fft.rfft2(pad)
    G1, G2 = _kernel_tables(field.length, n, params.alpha)
    h2 = field.h ** 2
    u1 = np.fft.irfft2(np.fft.rfft2(G1) * ft, s=(m, m))[:n, :n] * (params.c0 * h2)
    u2 = np.fft.irfft2(np.fft.rfft2(G2) * ft, s=(m, m))[:n, :n] * (-params.c0 * h2)
    field.theta = theta
    field.u1 = u1
    field.u2 = u2
    return field


def iterate(field: Field2D, params: AlphaParams, update: Callable, steps: int = 1) -> Field2D:
    """Drive a caller-supplied update rule: update(field, params) -> new theta.

    No default 2D self-similar update ships as trusted; this hook only wires
    velocity evaluation and reflection around the supplied rule.
    """
    for _ in range(steps):
        field = velocity_from_theta(field, params)
        field.theta = enforce_odd_in_y(np.asarray(update(field, params), dtype=float))
    return velocity_from_theta(field, params)


def cross_sections(field: Field2D, xs=(), ys=()) -> dict:
    """Sample theta, u1, u2 along vertical lines x = const and horizontal
    lines y = const by bilinear interpolation.

    Returns {"x=<v>": {"coord", "theta", "u1", "u2"}, "y=<v>": ...}.
    """
    if field.u1 is None or field.u2 is None:
        raise DomainError("velocities not evaluated; run velocity_from_theta first")
    grid = field.xs
    lo, hi = grid[0], grid[-1]
    out = {}

    def _interp_along(fixed, axis):
        if hi < fixed <= hi + field.h:
            fixed = hi          # the nominal right edge is not a node; clamp
        if not lo <= fixed <= hi:
            raise DomainError(f"section at {fixed} outside the grid [{lo}, {hi}]")
        j = min(int((fixed - lo) / field.h), field.n - 2)
        w = (fixed - grid[j]) / field.h
        res = {"coord": grid}
        for name, arr in [("theta", field.theta), ("u1", field.u1), ("u2", field.u2)]:
            if axis == "x":       # vertical line: interpolate across columns
                res[name] = (1 - w) * arr[:, j] + w * arr[:, j + 1]
            else:                 # horizontal line: interpolate across rows
                res[name] = (1 - w) * arr[j, :] + w * arr[j + 1, :]
        return res

    for v in xs:
        out[f"x={v:g}"] = _interp_along(float(v), "x")
    for v in ys:
        out[f"y={v:g}"] = _interp_along(float(v), "y")
    return out
