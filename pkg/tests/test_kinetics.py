import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from mealsim.kinetics import CstrSpec, PfrFluxSpec, StoichiometricSystem, cstr_rhs, pfr_flux, production_rates


def test_a_to_b():
    k = 0.3
    sys = StoichiometricSystem([[-1, 1]], lambda c: np.array([k * c[0]]))
    R = production_rates(sys, [2.0, 5.0])
    np.testing.assert_allclose(R, [-0.6, 0.6])
    assert R.sum() == 0.0


def test_zero_rates():
    sys = StoichiometricSystem([[-1, 1], [1, -1]], lambda c: np.zeros(2))
    np.testing.assert_array_equal(production_rates(sys, [1.0, 1.0]), [0.0, 0.0])


def test_second_order():
    sys = StoichiometricSystem([[-2, 1]], lambda c: np.array([c[0] ** 2]))
    np.testing.assert_allclose(production_rates(sys, [3.0, 0.0]), [-18.0, 9.0])


def test_shape_checks():
    sys = StoichiometricSystem([[-1, 1]], lambda c: np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        production_rates(sys, [1.0, 2.0])
    with pytest.raises(ValueError):
        production_rates(StoichiometricSystem([[-1, 1]], lambda c: c[:1]), [1.0])


@settings(max_examples=100, deadline=None)
@given(S=arrays(float, (3, 4), elements=st.floats(-5, 5)), c=arrays(float, 4, elements=st.floats(0, 10)),
       k=arrays(float, 3, elements=st.floats(0, 3)))
def test_conservative_stoichiometry(S, c, k):
    S = S - S.mean(axis=1, keepdims=True)  # rows sum to zero
    sys = StoichiometricSystem(S, lambda x: k * np.sqrt(x.sum() + 1.0) * (1 + x[:3]))
    R = production_rates(sys, c)
    assert abs(R.sum()) <= 1e-9 * (1 + np.abs(R).sum())


def test_cstr_examples():
    spec = CstrSpec(V=2.0, F=1.0, c_in=[4.0])
    np.testing.assert_array_equal(cstr_rhs(spec, [0.0], [0.0]), [2.0])
    np.testing.assert_array_equal(cstr_rhs(spec, [4.0], [0.0]), [0.0])
    batch = CstrSpec(V=3.0, F=0.0, c_in=[7.0, 1.0])
    np.testing.assert_array_equal(cstr_rhs(batch, [1.0, 2.0], [0.5, -0.25]), [0.5, -0.25])


def test_cstr_validation():
    with pytest.raises(ValueError):
        CstrSpec(V=0.0, F=1.0, c_in=[1.0])
    with pytest.raises(ValueError):
        cstr_rhs(CstrSpec(V=1.0, F=1.0, c_in=[1.0, 2.0]), [1.0], [0.0])


def test_pfr_flux():
    assert pfr_flux(PfrFluxSpec(v=0.5), 3.0, 10.0) == 1.5
    assert pfr_flux(PfrFluxSpec(v=0.0, D_c=2.0), 1.0, -1.0) == 2.0
    assert pfr_flux(PfrFluxSpec(v=1.0, D_c=1.0), 0.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        PfrFluxSpec(v=1.0, D_c=-1.0)
