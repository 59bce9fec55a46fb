"""Grid constructors: exact node formulas and refinement nesting."""

import numpy as np
import pytest

from gsqg1d.errors import DomainError
from gsqg1d.mesh import power_mesh, refine, sinh_mesh, uniform_mesh


def test_power_mesh_paper_scale_spacings():
    m = power_mesh(5.0, 50_000, 2.0)
    assert m.nodes[1] == pytest.approx(2e-9, rel=1e-12)
    assert m.nodes[-1] - m.nodes[-2] == pytest.approx(2e-4, rel=1e-3)
    assert m.nodes[0] == 0.0
    assert np.all(np.diff(m.nodes) > 0)


def test_power_mesh_exact_formula():
    m = power_mesh(3.0, 64, 2.5)
    i = np.arange(64)
    np.testing.assert_array_equal(m.nodes, 3.0 * (i / 64) ** 2.5)


def test_power_mesh_p1_is_uniform():
    m = power_mesh(2.0, 32, 1.0)
    np.testing.assert_allclose(np.diff(m.nodes), 2.0 / 32, rtol=1e-15)
    u = uniform_mesh(2.0, 32)
    np.testing.assert_array_equal(m.nodes, u.nodes)


def test_sinh_mesh_paper_scales():
    m = sinh_mesh(20.0, 50_000)
    assert m.nodes[-1] == pytest.approx(2.43e8, rel=1e-2)
    assert m.nodes[1] == pytest.approx(4e-4, rel=1e-2)
    m = sinh_mesh(15.0, 10_000)
    assert m.nodes[-1] == pytest.approx(1.63e6, rel=1e-2)


def test_refine_nests_nodes():
    for m in [power_mesh(5.0, 100, 2.0), sinh_mesh(15.0, 100)]:
        r = refine(m, 2)
        assert r.n == 2 * m.n
        np.testing.assert_allclose(r.nodes[::2], m.nodes, rtol=0, atol=1e-14 * max(1, m.length))


def test_mesh_length_excludes_nominal_endpoint():
    m = power_mesh(5.0, 100, 2.0)
    assert m.length == pytest.approx(5.0 * (99 / 100) ** 2)


def test_domain_errors():
    with pytest.raises(DomainError):
        power_mesh(-1.0, 100, 2.0)
    with pytest.raises(DomainError):
        power_mesh(1.0, 8, 2.0)
    with pytest.raises(DomainError):
        power_mesh(1.0, 100, 0.5)
    with pytest.raises(DomainError):
        sinh_mesh(0.0, 100)
    with pytest.raises(DomainError):
        refine(power_mesh(1.0, 100, 2.0), 0)
