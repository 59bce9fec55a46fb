"""Acceptance suite: every primary criterion at its stated tolerance.

Each criterion prints one [PASS]/[FAIL] line (visible with pytest -s).  The
paper-scale n = 5e4 runs and 2048^2 2D runs are out of desk scope by
design; they are replaced by the refinement-trend and property criteria
plus the 2D parity/boundary invariants below, per the stated criteria.

One sub-assertion is a documented expected failure: the slope-at-t0
membership check on the converged half-plane profile (the source
derivative-bound chain drops a factor t0; see the decisions ledger).  It is
kept as a strict xfail so an unexpected pass would be flagged.
"""

import numpy as np
import pytest
from scipy.integrate import quad

import gsqg1d.specfun as sf
from conftest import random_member_hp, random_member_r2
from gsqg1d.field2d import make_field, velocity_from_theta
from gsqg1d.fixedpoint import (
    burgers_limit_gap,
    sinc_limit_gap,
    solve_hp,
    solve_r2,
)
from gsqg1d.membership import check_V1, check_V1_hp, check_lemma_bounds
from gsqg1d.mesh import power_mesh, refine, sinh_mesh
from gsqg1d.operators_hp import (
    apply_Re_alpha,
    compute_functionals_hp,
    fit_tail,
    u_tail_correction,
)
from gsqg1d.operators_r2 import apply_R_alpha
from gsqg1d.params import make_alpha_params
from gsqg1d.quadrature import (
    assemble_p1,
    assemble_T_f1form,
    assemble_u_hp,
)


def line(ok: bool, text: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {text}")


# -------------------------------------------------------------------------
# criterion 1: special-function identity suite
# -------------------------------------------------------------------------

def test_criterion_specfun_identities():
    gammas = [0.1, -0.1, 0.4, -0.4, 0.8, 0.0]
    ts = np.array([t for t in np.logspace(-6, 6, 49) if abs(t - 1) > 1e-9])
    worst = 0.0
    for g in gammas:
        low = ts[ts < 1]
        refl1 = np.abs(sf.f1_prime(g, 1 / low) - low ** (2 - g) * sf.f1_prime(g, low))
        refl2 = np.abs(sf.f2_prime(g, 1 / low) - low ** (4 - g) * sf.f2_prime(g, low))
        worst = max(worst,
                    np.max(refl1 / np.abs(sf.f1_prime(g, 1 / low))),
                    np.max(refl2 / np.abs(sf.f2_prime(g, 1 / low))))
        # limits (the true approach to the limit is O(t^(g-2)), so the limit
        # itself is checked where that correction is below tolerance)
        lim1 = abs(sf.f1(g, 1e12) / (2 / (1 + g)) - 1)
        lim2 = abs(sf.f2(g, 1e12) / (2 * (2 - g) / (3 * (1 + g))) - 1)
        lim3 = abs(sf.f1_prime(g, 1e-9) / 1e-9 / (2 * (2 - g) / 3) - 1)
        worst = max(worst, lim1, lim2, lim3)
        # F2 defining ODE across the whole grid
        lhs = ts * sf.f2_prime(g, ts) - (1 + g) * sf.f2(g, ts)
        rhs = sf.f1_prime(g, ts) / ts - 2 * (2 - g) / 3
        scale = np.maximum(np.abs(lhs) + np.abs(rhs), 1e-3)
        worst = max(worst, np.max(np.abs(lhs - rhs) / scale))
    ok = worst <= 1e-9
    line(ok, f"specfun identity suite: worst relative error {worst:.2e} <= 1e-9")
    assert ok


# -------------------------------------------------------------------------
# criterion 2: quadrature oracles
# -------------------------------------------------------------------------

def test_criterion_hilbert_pair():
    mesh = power_mesh(40.0, 2000, 2.0)
    params = make_alpha_params(0.5)
    M = assemble_p1(mesh, params, parity="even")
    x = mesh.nodes
    err = np.abs(M.apply(1 / (1 + x**2)) - x / (1 + x**2))
    sup = float(np.max(err[x <= 5.0]))
    ok = sup < 1e-4
    line(ok, f"Hilbert pair alpha=1/2: sup error {sup:.2e} < 1e-4 on [0,5]")
    assert ok


DENSITIES = [
    lambda xi: xi * np.exp(-(xi**2)),
    lambda xi: xi * (1 + xi**2) ** -2.0,
    lambda xi: xi * np.exp(-0.5 * (xi - 1.5) ** 2) * (1 + 0.3 * xi**2) ** -1.0,
]
EVEN_DENSITIES = [
    lambda xi: np.exp(-(xi**2)),
    lambda xi: (1 + xi**2) ** -1.5,
    lambda xi: (1 + 0.5 * xi**2) ** -2.0,
]


def test_criterion_operator_oracles():
    mesh = power_mesh(12.0, 1200, 2.0)
    X = mesh.length
    probes = [40, 200, 500, 900, 1150]
    worst = 0.0

    alpha = 0.3
    params = make_alpha_params(alpha, half_plane=True)
    M = assemble_p1(mesh, params, parity="odd")
    for om in DENSITIES:
        got = M.apply(om(mesh.nodes))
        for i in probes:
            x = mesh.nodes[i]
            k = lambda s: np.sign(s) * np.abs(s) ** (-2 * alpha)
            lo, hi = max(0.0, x - 0.5), min(X, x + 0.5)
            i1 = quad(lambda xi: (om(xi) - om(x)) * k(x - xi), lo, hi,
                      points=[x], limit=400)[0]
            i1 += om(x) * ((x - lo) ** (1 - 2 * alpha)
                           - (hi - x) ** (1 - 2 * alpha)) / (1 - 2 * alpha)
            i2 = quad(lambda xi: om(xi) * k(x - xi), 0, lo, limit=400)[0] if lo else 0
            i3 = quad(lambda xi: om(xi) * k(x - xi), hi, X, limit=400)[0] if hi < X else 0
            i4 = quad(lambda xi: om(xi) * k(x + xi), 0, X, limit=400)[0]
            want = params.c1 * (i1 + i2 + i3 - i4)
            worst = max(worst, abs(got[i] - want) / abs(want))

    MU = assemble_u_hp(mesh, params, parity="odd")
    const = 2 * params.c0 / (-2 * alpha)
    for th in DENSITIES:
        got = MU.apply(th(mesh.nodes))
        for i in probes:
            x = mesh.nodes[i]
            i1 = quad(lambda xi: th(xi) * np.abs(x - xi) ** (-2 * alpha),
                      0, X, points=[x], limit=400)[0]
            i2 = quad(lambda xi: th(xi) * (x + xi) ** (-2 * alpha), 0, X, limit=400)[0]
            worst = max(worst, abs(got[i] - const * (i1 - i2)) / abs(const * (i1 - i2)))

    for which, a in [("full_plane", 0.3), ("half_plane", 0.2)]:
        p = make_alpha_params(a, half_plane=(which == "half_plane"))
        gam = p.gamma_r2 if which == "full_plane" else p.gamma_hp
        cst = p.c1 if which == "full_plane" else -2 * p.c0
        MT = assemble_T_f1form(mesh, p, which)
        for f_fn in EVEN_DENSITIES:
            got = MT.apply(f_fn(mesh.nodes))
            h = 1e-6
            fp = lambda xi: (f_fn(xi + h) - f_fn(xi - h)) / (2 * h)
            for i in probes:
                x = mesh.nodes[i]
                integ = lambda xi: fp(xi) * xi ** (1 + gam) * sf.f1(gam, x / xi)
                want = cst * (quad(integ, 0, x, limit=400)[0]
                              + quad(integ, x, X, limit=400)[0])
                worst = max(worst, abs(got[i] - want) / abs(want))

    ok = worst <= 1e-5
    line(ok, f"operator oracles (4 kinds x 3 densities): worst rel {worst:.2e} <= 1e-5")
    assert ok


# -------------------------------------------------------------------------
# criterion 3: full plane alpha = 0.3 at scale
# -------------------------------------------------------------------------

@pytest.fixture(scope="module")
def r2_full():
    params = make_alpha_params(0.3)
    mesh = power_mesh(5.0, 2000, 2.0)
    rep = solve_r2(params, mesh, tol=1e-7)
    return params, mesh, rep


def test_criterion_full_plane_alpha03(r2_full):
    params, mesh, rep = r2_full
    F = rep.functionals
    conds = {
        "converged <= 200 iterations": rep.converged and rep.iterations <= 200,
        "membership check_V1": rep.membership.passed,
        "compact support inside [0,5]": rep.profile.compactly_supported
                                        and rep.support_radius < 5.0,
        "c_ell < 0 and b > c": F.c_ell < 0 and F.b > F.c,
        "ODE residual < 1e-3 (inner 90%)": rep.ode_residual.max_normalized < 1e-3,
    }
    for name, ok in conds.items():
        line(ok, f"full plane alpha=0.3: {name}")
    assert all(conds.values()), conds


def test_criterion_full_plane_refinement(r2_full):
    params, mesh, rep = r2_full
    rep4 = solve_r2(params, refine(mesh, 2), tol=1e-7, compute_ode_residual=False)
    diff = float(np.max(np.abs(rep4.profile.f[::2] - rep.profile.f)))
    ok = diff <= 1e-5
    line(ok, f"full plane refinement n=2000 vs 4000: sup diff {diff:.2e} <= 1e-5")
    assert ok


# -------------------------------------------------------------------------
# criterion 4: sinc limit
# -------------------------------------------------------------------------

def test_criterion_sinc_limit():
    mesh = power_mesh(5.0, 2000, 2.0)
    gaps = {}
    for alpha in [0.05, 0.02, 0.01]:
        rep = solve_r2(make_alpha_params(alpha), mesh, tol=1e-7,
                       compute_ode_residual=False)
        assert rep.converged
        gaps[alpha] = sinc_limit_gap(rep)
    ok = gaps[0.01] < 2e-2
    line(ok, f"sinc limit alpha=0.01: gap {gaps[0.01]:.2e} < 2e-2")
    trend = gaps[0.05] > gaps[0.02] > gaps[0.01]
    line(trend, f"sinc gap decreases along alpha 0.05/0.02/0.01: "
                f"{gaps[0.05]:.3e} > {gaps[0.02]:.3e} > {gaps[0.01]:.3e}")
    assert ok and trend


# -------------------------------------------------------------------------
# criterion 5: half plane alpha = 0.1 at scale
# -------------------------------------------------------------------------

@pytest.fixture(scope="module")
def hp_full():
    params = make_alpha_params(0.1, half_plane=True)
    mesh = sinh_mesh(15.0, 4000)
    rep = solve_hp(params, mesh, tol=1e-7)
    return params, mesh, rep


def test_criterion_half_plane_alpha01(hp_full):
    params, mesh, rep = hp_full
    F = rep.functionals
    a = params.alpha
    nonslope = [c for c in rep.membership.checks if c.name != "slope_at_t0"]
    bounds = check_lemma_bounds(rep.profile, params, F, t_values=rep.t_values)

    # dual-route T agreement, normalized by max |T|
    U = assemble_u_hp(mesh, params, parity="odd")
    u = U.apply(rep.profile.theta) + u_tail_correction(mesh, params, F.tail)
    dual = np.zeros(mesh.n)
    dual[1:] = u[1:] / mesh.nodes[1:] + F.b_frak
    dual_err = float(np.max(np.abs(rep.t_values - dual)[1:]) / np.max(np.abs(rep.t_values)))

    conds = {
        "converged": rep.converged,
        "c_ell/c_theta > 1/(2a) = 5": F.c_ell / F.c_theta > 1 / (2 * a),
        "membership (all checks except slope_at_t0)": all(c.passed for c in nonslope),
        "bcbound bracket holds": (params.b_lo <= F.b_frak <= params.b_hi
                                  and F.c_frak <= params.c_hi),
        "T concavity ledger at probes": bounds.passed,
        "dual-route T agreement <= 1e-4": dual_err <= 1e-4,
    }
    for name, ok in conds.items():
        line(ok, f"half plane alpha=0.1: {name}")
    line(False, "half plane alpha=0.1: slope_at_t0 membership sub-check "
                "(documented paper defect; see decisions ledger)")
    assert all(conds.values()), conds


@pytest.mark.xfail(strict=True,
                   reason="slope-at-t0 fails at the converged profile: the "
                          "derivative-bound invariance chain drops a factor t0 "
                          "(decisions ledger)")
def test_criterion_half_plane_slope_defect(hp_full):
    _, _, rep = hp_full
    assert rep.membership.check("slope_at_t0").passed


def test_criterion_half_plane_truncation_sensitivity(hp_full):
    params, mesh, rep = hp_full
    rep18 = solve_hp(params, sinh_mesh(18.0, 4000), tol=1e-7,
                     compute_ode_residual=False)
    shift = abs(rep18.functionals.c_ell_norm - rep.functionals.c_ell_norm)
    ok = 1.1e-2 / 3 <= shift <= 1.1e-2 * 3
    line(ok, f"half plane truncation sensitivity: |d c_ell_norm| = {shift:.2e} "
             f"within factor 3 of 1.1e-2")
    assert ok


def test_criterion_half_plane_refinement(hp_full):
    params, mesh, rep = hp_full
    rep2 = solve_hp(params, sinh_mesh(15.0, 2000), tol=1e-7,
                    compute_ode_residual=False)
    diff = float(np.max(np.abs(rep.profile.f[::2] - rep2.profile.f)))
    ok = diff <= 1e-5
    line(ok, f"half plane refinement n=2000 vs 4000: sup diff {diff:.2e} <= 1e-5")
    assert ok


# -------------------------------------------------------------------------
# criterion 6: Burgers limit
# -------------------------------------------------------------------------

def test_criterion_burgers_limit():
    params = make_alpha_params(0.45, half_plane=True)
    rep = solve_hp(params, power_mesh(200.0, 3000, 2.0), tol=1e-7,
                   compute_ode_residual=False)
    assert rep.converged
    gap = burgers_limit_gap(rep)
    ok = gap < 5e-2
    line(ok, f"Burgers limit alpha=0.45: rescaled gap {gap:.2e} < 5e-2 on [0,10]")
    assert ok


# -------------------------------------------------------------------------
# criterion 7: invariance property suite
# -------------------------------------------------------------------------

def test_criterion_invariance_suite():
    rng = np.random.default_rng(2024)

    params = make_alpha_params(0.3)
    mesh = power_mesh(5.0, 800, 2.0)
    T = assemble_T_f1form(mesh, params, "full_plane")
    r2_ok = True
    for _ in range(20):
        p = random_member_r2(mesh, params, rng)
        g = apply_R_alpha(p, T, params)
        r2_ok &= check_V1(g, params, tol=1e-8).passed
    line(r2_ok, "invariance: 20 full-plane members map into the set (tol 1e-8)")

    params_hp = make_alpha_params(0.1, half_plane=True)
    mesh_hp = sinh_mesh(15.0, 1000)
    Thp = assemble_T_f1form(mesh_hp, params_hp, "half_plane")
    hp_ok = True
    for _ in range(20):
        p = random_member_hp(mesh_hp, params_hp, rng)
        g = apply_Re_alpha(p, Thp, params_hp,
                           tail=fit_tail(p, params_hp, strict=False))
        hp_ok &= check_V1_hp(g, params_hp, tol=1e-8).passed
    line(hp_ok, "invariance: 20 half-plane members map into the set (tol 1e-8)")
    assert r2_ok and hp_ok


# -------------------------------------------------------------------------
# criterion 8: 2D parity/boundary invariants (desk-scale replacement)
# -------------------------------------------------------------------------

def test_criterion_field2d_invariants():
    params = make_alpha_params(0.15, half_plane=True)
    f = make_field(16.0, 256,
                   lambda x, y: x * np.exp(-0.25 * x**2) * y * np.exp(-(y - 1.5) ** 2))
    f = velocity_from_theta(f, params)
    n = f.n
    iy0 = n // 2
    u2_boundary = float(np.max(np.abs(f.u2[iy0, :])) / np.max(np.abs(f.u2)))
    rows = np.arange(1, n // 2)
    par1 = float(np.max(np.abs(f.u1[rows, :] - f.u1[n - rows, :])) / np.max(np.abs(f.u1)))
    par2 = float(np.max(np.abs(f.u2[rows, :] + f.u2[n - rows, :])) / np.max(np.abs(f.u2)))
    ok = u2_boundary <= 1e-10 and par1 <= 1e-10 and par2 <= 1e-10
    line(ok, f"field2d n=256: u2|y=0 {u2_boundary:.1e} <= 1e-10; "
             f"u1 even / u2 odd in y to {max(par1, par2):.1e}")
    assert ok
