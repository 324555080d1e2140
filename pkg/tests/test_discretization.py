import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from mealsim.discretization import (DomainMap, FvGrid, SpectralDiscretization, fv_partial_integral,
                                    fv_semidiscretize, sg_integral, sg_semidiscretize, spectral_basis)
from mealsim.integrator import dopri5
from mealsim.kinetics import PfrFluxSpec

# finite volume -------------------------------------------------------------------


def test_fv_rest():
    g = FvGrid.uniform(0.0, 1.0, 10, 2.0)
    np.testing.assert_array_equal(fv_semidiscretize(g, PfrFluxSpec(0.0), 0.0, 0.0, np.ones(10)), np.zeros(10))


def test_fv_matched_inlet_equilibrium():
    area, v, c = 0.3, 0.7, 2.5
    g = FvGrid.uniform(0.0, 2.0, 25, area)
    dm = fv_semidiscretize(g, PfrFluxSpec(v), area * v * c, 0.0, g.masses_from_concentration(c))
    np.testing.assert_allclose(dm, 0.0, atol=1e-14)


@settings(max_examples=100, deadline=None)
@given(m=arrays(float, 12, elements=st.floats(-10, 100)), F=st.floats(0, 50), v=st.floats(0, 2),
       dc=st.floats(0, 1), q=arrays(float, 12, elements=st.floats(-1, 1)))
def test_fv_discrete_conservation(m, F, v, dc, q):
    edges = np.cumsum(np.r_[0.0, np.linspace(0.5, 1.5, 12)])
    g = FvGrid(edges, 0.4)
    dm = fv_semidiscretize(g, PfrFluxSpec(v, dc), F, q, m)
    outlet = g.area * v * g.concentrations(m)[-1]
    expected = F - outlet + np.sum(g.area * g.widths * q)
    assert abs(dm.sum() - expected) <= 1e-12 * (1 + abs(F) + np.abs(m).sum() * (v + dc) + np.abs(q).sum())


def test_fv_callable_source():
    g = FvGrid.uniform(0.0, 1.0, 4, 1.0)
    dm = fv_semidiscretize(g, PfrFluxSpec(0.0), 0.0, lambda c: -2.0 * c, np.ones(4))
    np.testing.assert_allclose(dm, -2.0 * np.ones(4))


def test_fv_partial_integral():
    g = FvGrid.uniform(0.0, 1.0, 4, 1.0)
    m = np.full(4, 3.0)
    assert fv_partial_integral(g, m, 1.0) == 12.0
    assert fv_partial_integral(g, m, 0.0) == 0.0
    assert fv_partial_integral(g, m, 0.25) == 3.0
    assert fv_partial_integral(g, [1, 2, 3, 4], 0.375) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        fv_partial_integral(g, m, 1.5)


def test_fv_grid_validation():
    with pytest.raises(ValueError):
        FvGrid(np.array([0.0, 1.0, 1.0]))
    with pytest.raises(ValueError):
        FvGrid(np.array([0.0, 1.0]))


def test_fv_first_order_convergence():
    from scipy.special import erf
    errs = []
    for M in (50, 100, 200):
        g = FvGrid.uniform(0.0, 1.0, M, 1.0)
        e = g.edges
        avg = lambda x0: (erf((e[1:] - x0) / (np.sqrt(2) * 0.1)) - erf((e[:-1] - x0) / (np.sqrt(2) * 0.1))) \
            * 0.1 * np.sqrt(np.pi / 2)
        res = dopri5(lambda t, y: g.rhs(y, 0.0, 1.0, 0.0, 0.0), 0.0, avg(0.3), 0.25, rtol=1e-10, atol=1e-13)
        errs.append(np.abs(res.y_end - avg(0.55)).sum())
    assert 1.6 <= errs[0] / errs[1] <= 2.4 and 1.6 <= errs[1] / errs[2] <= 2.4


# spectral Galerkin -------------------------------------------------------------


def test_sg_rest():
    b = spectral_basis(8)
    np.testing.assert_array_equal(sg_semidiscretize(b, DomainMap(0, 1), PfrFluxSpec(1.0, 0.1), 0.0), np.zeros(9))


@pytest.mark.parametrize("M", [4, 16, 32])
def test_sg_matched_inlet_equilibrium(M):
    b = spectral_basis(M)
    dom = DomainMap(0.0, 2.85)
    area, v, c = 1e-3, 0.0102, 7.0
    dc = sg_semidiscretize(b, dom, PfrFluxSpec(v), area * v * c, 0.0, np.full(M + 1, c), area)
    np.testing.assert_allclose(dc, 0.0, atol=1e-10)


def test_sg_boundary_terms_local():
    b = spectral_basis(10)
    dom = DomainMap(0.0, 1.0)
    c = np.linspace(1.0, 2.0, 11) ** 2
    with_inlet = sg_semidiscretize(b, dom, PfrFluxSpec(0.3, 0.01), 5.0, 0.0, c)
    without = sg_semidiscretize(b, dom, PfrFluxSpec(0.3, 0.01), 0.0, 0.0, c)
    delta = with_inlet - without
    assert delta[0] != 0.0 and np.all(delta[1:] == 0.0)
    np.testing.assert_array_equal(b.ell_left, np.eye(11)[0])
    np.testing.assert_array_equal(b.ell_right, np.eye(11)[-1])


def test_sg_integrals():
    b = spectral_basis(12)
    dom = DomainMap(0.5, 3.5)
    area = 0.2
    assert sg_integral(b, dom, np.full(13, 4.0), area=area) == pytest.approx(area * 4.0 * 3.0, rel=1e-14)
    sq = b.nodes ** 2
    assert sg_integral(b, dom, sq, area=area) == pytest.approx(area * dom.jacobian * 2 / 3, rel=1e-14)
    assert sg_integral(b, dom, sq, (-1.0, 1.0), area) == pytest.approx(sg_integral(b, dom, sq, area=area),
                                                                         abs=1e-10)
    assert sg_integral(b, dom, sq, (-1.0, 0.0), area) == pytest.approx(area * dom.jacobian / 3, rel=1e-13)


def test_sg_conservation():
    rng = np.random.default_rng(3)
    b = spectral_basis(16)
    dom = DomainMap(0.0, 2.0)
    area = 0.5
    c = rng.normal(size=17)
    F, v = 3.0, 0.4
    dc = sg_semidiscretize(b, dom, PfrFluxSpec(v, 0.02), F, 0.0, c, area)
    mass_rate = area * dom.jacobian * (b.weights @ dc)
    assert mass_rate == pytest.approx(F - area * v * c[-1], rel=1e-12)


def test_sg_requires_legendre():
    with pytest.raises(ValueError):
        sg_semidiscretize(spectral_basis(6, "chebyshev"), DomainMap(0, 1), PfrFluxSpec(1.0), 0.0)
    assert spectral_basis(6, "chebyshev", "gauss").family == "chebyshev"


def test_fv_vs_sg_advection_diffusion():
    v, D, k, F = 0.0102, 1e-4, 8.5856e-3, 60.0
    area = np.pi * 0.018 ** 2
    fv = FvGrid.uniform(0.0, 2.85, 400, area)
    sg = SpectralDiscretization.legendre_lobatto(0.0, 2.85, 32, area)
    out = {}
    for name, disc in (("fv", fv), ("sg", sg)):
        t = np.linspace(0.0, 300.0, 301)
        res = dopri5(lambda _t, y: disc.rhs(y, F * np.exp(-0.05 * _t), v, D, k), 0.0, np.zeros(disc.n_dofs),
                     300.0, rtol=1e-8, atol=1e-10, max_step=5.0, t_eval=t)
        out[name] = res.samples @ disc.mass_weights
    assert np.max(np.abs(out["fv"] - out["sg"])) <= 0.02 * np.max(out["fv"])
