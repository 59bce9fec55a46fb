"""Operator matrices against independent adaptive-quadrature oracles.

Oracles integrate the same truncated densities with scipy.integrate.quad
(splitting at the singular point; the principal value is isolated by
subtracting the density value at the singularity, whose kernel integral
over a window symmetric in the antiderivative is added back analytically).
"""

import numpy as np
import pytest
from scipy.integrate import cumulative_trapezoid, quad

from gsqg1d import specfun as sf
from gsqg1d.errors import DomainError
from gsqg1d.mesh import power_mesh, refine
from gsqg1d.params import make_alpha_params
from gsqg1d.quadrature import (
    OpKind,
    assemble_p1,
    assemble_T_f1form,
    assemble_u_hp,
    load_weights,
    power_weight_vector,
)

DENSITIES = [
    (lambda xi: xi * np.exp(-(xi**2)), "gauss"),
    (lambda xi: xi * (1 + xi**2) ** -2.0, "rational"),
    (lambda xi: xi * np.exp(-0.5 * (xi - 1.5) ** 2) * (1 + 0.3 * xi**2) ** -1.0, "shifted"),
]


def p1_oracle(x, om_fn, alpha, c1, X):
    """PV integral of the odd-folded kernel against the truncated density."""
    def k(s):
        return np.sign(s) * np.abs(s) ** (-2 * alpha)
    lo, hi = max(0.0, x - 0.5), min(X, x + 0.5)
    i1 = quad(lambda xi: (om_fn(xi) - om_fn(x)) * k(x - xi), lo, hi,
              points=[x], limit=400)[0]
    # exact PV of the kernel over [lo, hi]
    if alpha == 0.5:
        pv = np.log((x - lo) / (hi - x)) if hi > x > lo else 0.0
    else:
        pv = ((x - lo) ** (1 - 2 * alpha) - (hi - x) ** (1 - 2 * alpha)) / (1 - 2 * alpha)
    i1 += om_fn(x) * pv
    i2 = quad(lambda xi: om_fn(xi) * k(x - xi), 0, lo, limit=400)[0] if lo > 0 else 0.0
    i3 = quad(lambda xi: om_fn(xi) * k(x - xi), hi, X, limit=400)[0] if hi < X else 0.0
    i4 = quad(lambda xi: om_fn(xi) * k(x + xi), 0, X, limit=400)[0]
    return c1 * (i1 + i2 + i3 - i4)


@pytest.fixture(scope="module")
def mesh1200():
    return power_mesh(12.0, 1200, 2.0)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.75])
def test_p1_matches_pv_oracle(mesh1200, alpha):
    params = make_alpha_params(alpha)
    M = assemble_p1(mesh1200, params, parity="odd")
    X = mesh1200.length
    for om_fn, _name in DENSITIES:
        got = M.apply(om_fn(mesh1200.nodes))
        for i in [40, 200, 500, 900, 1150]:
            x = mesh1200.nodes[i]
            want = p1_oracle(x, om_fn, alpha, params.c1, X)
            assert got[i] == pytest.approx(want, rel=1e-5, abs=1e-9)


def test_p1_value_at_origin_is_finite_moment(mesh1200):
    # odd fold at x = 0: -2 c1 int om(xi) xi^(-2a) dxi
    alpha = 0.3
    params = make_alpha_params(alpha)
    M = assemble_p1(mesh1200, params, parity="odd")
    om_fn = DENSITIES[0][0]
    want = -2 * params.c1 * quad(lambda xi: om_fn(xi) * xi ** (-2 * alpha),
                                 0, mesh1200.length, limit=400)[0]
    got = M.apply(om_fn(mesh1200.nodes))[0]
    assert got == pytest.approx(want, rel=1e-6)


def test_hilbert_pair_even_parity():
    # alpha = 1/2: P1 is the Hilbert transform; H[1/(1+t^2)] = x/(1+x^2)
    mesh = power_mesh(40.0, 2000, 2.0)
    params = make_alpha_params(0.5)
    M = assemble_p1(mesh, params, parity="even")
    x = mesh.nodes
    got = M.apply(1.0 / (1.0 + x**2))
    want = x / (1.0 + x**2)
    sel = x <= 5.0
    assert np.max(np.abs(got[sel] - want[sel])) < 1e-4


def test_zero_density_maps_to_zero(mesh1200):
    params = make_alpha_params(0.3)
    M = assemble_p1(mesh1200, params, parity="odd")
    assert np.all(M.apply(np.zeros(mesh1200.n)) == 0.0)


def test_linearity(mesh1200):
    params = make_alpha_params(0.35)
    M = assemble_T_f1form(mesh1200, params, "full_plane")
    x = mesh1200.nodes
    f = np.exp(-(x**2))
    g = (1 + x**2) ** -1.0
    lhs = M.apply(2.5 * f - 1.25 * g)
    rhs = 2.5 * M.apply(f) - 1.25 * M.apply(g)
    np.testing.assert_allclose(lhs, rhs, rtol=0, atol=1e-13 * np.max(np.abs(lhs)))


def test_reproducible_bit_for_bit(mesh1200):
    params = make_alpha_params(0.22, half_plane=True)
    A = assemble_u_hp(mesh1200, params)
    B = assemble_u_hp(mesh1200, params)
    np.testing.assert_array_equal(A.weights, B.weights)


@pytest.mark.parametrize("alpha", [0.1, 0.25, 0.45])
def test_u_hp_matches_oracle(mesh1200, alpha):
    params = make_alpha_params(alpha, half_plane=True)
    M = assemble_u_hp(mesh1200, params, parity="odd")
    X = mesh1200.length
    const = 2 * params.c0 / (-2 * alpha)
    for th_fn, _name in DENSITIES:
        got = M.apply(th_fn(mesh1200.nodes))
        for i in [40, 200, 500, 900, 1150]:
            x = mesh1200.nodes[i]
            i1 = quad(lambda xi: th_fn(xi) * np.abs(x - xi) ** (-2 * alpha),
                      0, X, points=[x], limit=400)[0]
            i2 = quad(lambda xi: th_fn(xi) * (x + xi) ** (-2 * alpha),
                      0, X, limit=400)[0]
            want = const * (i1 - i2)
            assert got[i] == pytest.approx(want, rel=1e-6)


def test_u_hp_odd_symmetry_at_origin(mesh1200):
    params = make_alpha_params(0.25, half_plane=True)
    M = assemble_u_hp(mesh1200, params, parity="odd")
    th = DENSITIES[1][0](mesh1200.nodes)
    assert abs(M.apply(th)[0]) < 1e-12


@pytest.mark.parametrize("alpha,which", [(0.3, "full_plane"), (0.9, "full_plane"),
                                         (0.1, "half_plane"), (0.45, "half_plane")])
def test_T_matches_f1form_oracle(mesh1200, alpha, which):
    params = make_alpha_params(alpha, half_plane=(which == "half_plane"))
    gamma = params.gamma_r2 if which == "full_plane" else params.gamma_hp
    const = params.c1 if which == "full_plane" else -2 * params.c0
    M = assemble_T_f1form(mesh1200, params, which)
    X = mesh1200.length
    f_fn = lambda xi: (1 + xi**2) ** -1.5
    fp_fn = lambda xi: -3 * xi * (1 + xi**2) ** -2.5
    got = M.apply(f_fn(mesh1200.nodes))
    for i in [40, 200, 500, 900, 1150]:
        x = mesh1200.nodes[i]
        integ = lambda xi: fp_fn(xi) * xi ** (1 + gamma) * sf.f1(gamma, x / xi)
        want = const * (quad(integ, 0, x, limit=400)[0]
                        + quad(integ, x, X, limit=400)[0])
        assert got[i] == pytest.approx(want, rel=2e-5)


def test_T_annihilates_constants(mesh1200):
    params = make_alpha_params(0.3)
    M = assemble_T_f1form(mesh1200, params, "full_plane")
    out = M.apply(np.ones(mesh1200.n))
    assert np.max(np.abs(out)) < 1e-12


def test_T_vanishes_at_origin(mesh1200):
    params = make_alpha_params(0.3)
    M = assemble_T_f1form(mesh1200, params, "full_plane")
    assert np.all(M.weights[0] == 0.0)


def test_cross_form_consistency_full_plane():
    # T from the F1 form vs the velocity route v(x)/x - v'(0) built from the
    # P1 matrix and cumulative summation, on the seed profile
    alpha = 0.3
    params = make_alpha_params(alpha)
    mesh = power_mesh(5.0, 2000, 2.0)
    x = mesh.nodes
    f = np.maximum(0.0, 1.0 - x**2)
    om = -x * f
    T1 = assemble_T_f1form(mesh, params, "full_plane").apply(f)
    ux = assemble_p1(mesh, params, parity="odd").apply(om)
    u = np.concatenate([[0.0], cumulative_trapezoid(ux, x)])
    T2 = np.zeros_like(T1)
    T2[1:] = u[1:] / x[1:] - ux[0]
    scale = np.max(np.abs(T1))
    assert np.max(np.abs(T1 - T2)[1:]) < 1e-4 * scale


def test_T_hp_small_x_limit_matches_c_functional():
    # T(f)(x)/x^2 -> c(f)/2 with c(f) the truncated derivative-form value
    alpha = 0.2
    params = make_alpha_params(alpha, half_plane=True)
    mesh = power_mesh(40.0, 1500, 2.0)
    X = mesh.length
    f_fn = lambda xi: 1.0 / (1 + xi**2)
    M = assemble_T_f1form(mesh, params, "half_plane")
    got = M.apply(f_fn(mesh.nodes))
    fp_fn = lambda xi: -2 * xi * (1 + xi**2) ** -2.0
    c_half = -(8 * (1 + alpha) / 3.0) * params.c0 * quad(
        lambda xi: fp_fn(xi) * xi ** (-1 - 2 * alpha), 0, X, limit=400)[0] / 2.0
    x1 = mesh.nodes[1]
    assert got[1] / x1**2 == pytest.approx(c_half, rel=1e-2)


@pytest.mark.parametrize("alpha", [0.3])
def test_refinement_halves_oracle_error(alpha):
    params = make_alpha_params(alpha)
    om_fn = DENSITIES[1][0]
    errs = []
    for mesh in [power_mesh(12.0, 400, 2.0), power_mesh(12.0, 800, 2.0)]:
        M = assemble_p1(mesh, params, parity="odd")
        got = M.apply(om_fn(mesh.nodes))
        X = mesh.length
        err = 0.0
        for frac in [0.1, 0.35, 0.7]:
            i = int(frac * mesh.n)
            want = p1_oracle(mesh.nodes[i], om_fn, alpha, params.c1, X)
            err = max(err, abs(got[i] - want))
        errs.append(err)
    assert errs[0] / errs[1] >= 3.0


def test_weight_dump_roundtrip(tmp_path, mesh1200):
    params = make_alpha_params(0.3)
    M = assemble_p1(mesh1200, params, parity="odd")
    path = tmp_path / "p1.bin"
    M.dump(path)
    np.testing.assert_array_equal(load_weights(path), M.weights)
    raw = path.read_bytes()
    assert len(raw) == 8 + 8 * mesh1200.n**2
    assert int.from_bytes(raw[:8], "little") == mesh1200.n


def test_power_weight_vector_against_quad():
    mesh = power_mesh(8.0, 900, 2.0)
    f_fn = lambda xi: np.exp(-(xi**2)) * (1 + xi) ** -1.0
    for beta in [0.4, -0.2, -1.6, -2.4]:
        v = power_weight_vector(mesh, beta)
        dens = f_fn(mesh.nodes)
        if beta <= -1.0:
            dens = dens * mesh.nodes**2    # must vanish quadratically at 0
            want = quad(lambda xi: f_fn(xi) * xi ** (2 + beta), 0, mesh.length,
                        limit=400, points=[0.0])[0]
        else:
            want = quad(lambda xi: f_fn(xi) * xi**beta, 0, mesh.length,
                        limit=400, points=[0.0])[0]
        assert float(v @ dens) == pytest.approx(want, rel=2e-6)


def test_parity_argument_validated(mesh1200):
    params = make_alpha_params(0.3)
    with pytest.raises(DomainError):
        assemble_p1(mesh1200, params, parity="both")
    with pytest.raises(DomainError):
        assemble_T_f1form(mesh1200, params, "diagonal")


def test_op_kind_enum_round_trip(mesh1200):
    params = make_alpha_params(0.3)
    M = assemble_T_f1form(mesh1200, params, "full_plane")
    assert M.op_kind is OpKind.T_FULL_PLANE_F1FORM
    assert M.parity == "even"
