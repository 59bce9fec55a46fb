"""Shared fixtures and randomized invariant-set member generators.

The member families mirror the construction the analysis certifies: even,
monotone, square-root-convex shapes pinched between the barriers.  All
randomness is seeded; generated members are validated against the
membership checkers before use.
"""

import numpy as np
import pytest

from gsqg1d.membership import check_V1, check_V1_hp
from gsqg1d.mesh import Mesh, power_mesh, sinh_mesh
from gsqg1d.operators_hp import ProfileHP
from gsqg1d.operators_r2 import ProfileR2
from gsqg1d.params import AlphaParams, make_alpha_params


def random_member_r2(mesh: Mesh, params: AlphaParams, rng: np.random.Generator) -> ProfileR2:
    """Normalized mixture of (1 + s x^2)^(-d) bells, clipped to the lower
    barrier max(0, 1 - x^2)."""
    x = mesh.nodes
    k = rng.integers(2, 5)
    weights = rng.dirichlet(np.ones(k))
    s = rng.uniform(0.5, 3.0, size=k)
    d = rng.uniform(1.0, 4.0, size=k)
    f = np.zeros_like(x)
    for w, si, di in zip(weights, s, d):
        f += w * (1.0 + si * x**2) ** (-di)
    f = np.maximum(f, np.maximum(0.0, 1.0 - x**2))
    f[0] = 1.0
    p = ProfileR2(mesh, f)
    rep = check_V1(p, params)
    assert rep.passed, f"generator produced a non-member: {rep.to_dict()}"
    return p


def random_member_hp(mesh: Mesh, params: AlphaParams, rng: np.random.Generator) -> ProfileHP:
    """Parabola in s = x^2 joined with a shifted power tail (the max of two
    sqrt-convex shapes), tuned so the slope condition at t0 holds."""
    t0 = params.t0
    x = mesh.nodes
    s = x**2
    for _ in range(50):
        qt2 = rng.uniform(0.55 * t0 ** (params.alpha - 0.5) + 0.52, 0.95)
        q = qt2 / t0**2
        m = rng.uniform(max(0.55, 0.55 * params.delta_u), 1.2)
        tau = rng.uniform(0.05, 0.5) * t0
        zeta = rng.uniform(0.05, 0.5)
        f = np.maximum(1.0 - q * s, zeta * (1.0 + s / tau**2) ** (-m))
        f = np.minimum(f, 1.0)
        f[0] = 1.0
        p = ProfileHP(mesh, f)
        if check_V1_hp(p, params).passed:
            return p
    raise AssertionError("half-plane member generator failed 50 draws")


@pytest.fixture(scope="session")
def params_r2_03():
    return make_alpha_params(0.3)


@pytest.fixture(scope="session")
def params_hp_01():
    return make_alpha_params(0.1, half_plane=True)


@pytest.fixture(scope="session")
def mesh_r2_small():
    return power_mesh(5.0, 600, 2.0)


@pytest.fixture(scope="session")
def mesh_hp_small():
    return sinh_mesh(15.0, 800)
