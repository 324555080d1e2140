import math

import numpy as np
import pytest
from scipy.integrate import cumulative_trapezoid

from mealsim import MealEvent, MealSchedule, simulate
from mealsim.engine import MealContext
from mealsim.models import (Alskar, CstrPfrModel, CstrPfrParams, Moxon, Open, cstr_pfr_rhs, k_sd_alskar,
                            k_sd_moxon, make_discretization, rate_of_appearance)

P = CstrPfrParams()
MODES = (Open(), Moxon(), Alskar())


def test_derived_quantities():
    assert P.A_si == pytest.approx(math.pi * 0.018 ** 2)
    assert P.z_d == pytest.approx(0.08 * 2.85)
    assert P.absorption_rate == pytest.approx(2 * 12 / 0.018 * 6.4392e-6)
    assert P.absorption_rate == pytest.approx(8.5856e-3, rel=1e-12)


@pytest.mark.parametrize("scheme", ["fv", "sg"])
@pytest.mark.parametrize("mode", MODES, ids=lambda m: type(m).__name__)
def test_zero_state_zero_derivative(scheme, mode):
    disc = make_discretization(scheme, None, P)
    np.testing.assert_array_equal(cstr_pfr_rhs(np.zeros(disc.n_dofs + 1), disc, mode, 0.0, P),
                                  np.zeros(disc.n_dofs + 1))


def test_open_mode_emptying_flow():
    disc = make_discretization("fv", 100, P)
    x = np.zeros(101)
    x[0] = 1000.0
    f = cstr_pfr_rhs(x, disc, Open(), 0.0, P)
    assert f[0] == pytest.approx(-60.0)
    assert f[1] == pytest.approx(60.0)
    assert np.all(f[2:] == 0.0)


@pytest.mark.parametrize("scheme", ["fv", "sg"])
def test_total_mass_rate(scheme):
    model = CstrPfrModel(P, Alskar(), scheme=scheme)
    rng = np.random.default_rng(1)
    x = np.abs(rng.normal(size=model.n_states)) * 100
    d = 37.0
    f = model.rhs(0.0, x, d, MealContext())
    lhs = f[0] + model.disc.mass_weights @ f[1:]
    assert lhs == pytest.approx(d - model.outlet_flow(x) - model.output(x), rel=1e-10)


@pytest.mark.parametrize("scheme", ["fv", "sg"])
def test_rate_of_appearance_examples(scheme):
    disc = make_discretization(scheme, None, P)
    assert rate_of_appearance(np.zeros(disc.n_dofs), disc, P) == 0.0
    c = 11.0
    expected = P.A_si * 2 * P.f / P.r_si * P.v_a * c * (P.zf - P.z0)
    assert rate_of_appearance(disc.uniform_dofs(c), disc, P) == pytest.approx(expected, rel=1e-12)
    m = disc.mass_weights @ disc.uniform_dofs(c)
    assert rate_of_appearance(disc.uniform_dofs(c), disc, P) == pytest.approx(8.5856e-3 * m, rel=1e-12)


def test_k_sd_moxon():
    mode = Moxon()
    assert k_sd_moxon(mode.R_A_max, mode) == pytest.approx(mode.k_sd_max / 2)
    assert k_sd_moxon(0.0, mode) == pytest.approx(mode.k_sd_max, rel=1e-15)
    assert k_sd_moxon(1e9, mode) == 0.0
    grid = np.linspace(0, 1000, 2001)
    assert np.all(np.diff([k_sd_moxon(r, mode) for r in grid]) <= 0)
    assert np.all(np.diff([k_sd_moxon(r, mode) for r in np.linspace(300, 550, 500)]) < 0)


def test_k_sd_alskar():
    mode = Alskar()
    assert k_sd_alskar(0.0, mode) == mode.k_sd_max
    assert k_sd_alskar(mode.m_d50, mode) == pytest.approx(0.5 * (mode.k_sd_min + mode.k_sd_max))
    assert k_sd_alskar(1e12, mode) == pytest.approx(mode.k_sd_min)
    vals = [k_sd_alskar(m, mode) for m in np.linspace(3000, 12000, 500)]
    assert np.all(np.diff(vals) < 0)


def test_mode_validation():
    with pytest.raises(ValueError):
        Alskar(k_sd_min=0.2, k_sd_max=0.1)
    with pytest.raises(ValueError):
        Open(k_sd=0.0)
    with pytest.raises(ValueError):
        make_discretization("fd", None, P)


@pytest.mark.parametrize("scheme,tol", [("fv", 1e-9), ("sg", 1e-2)])
def test_global_mass_balance_over_time(scheme, tol):
    D = 90000.0
    model = CstrPfrModel(P, Moxon(), scheme=scheme)
    sched = MealSchedule((MealEvent(0.0, D / 2), MealEvent(120.0, D / 2, 15.0)))
    tr = simulate(model, sched, 600.0)
    absorbed = cumulative_trapezoid(tr.outputs, tr.times, initial=0.0)
    out = cumulative_trapezoid(model.outlet_flow(tr.states), tr.times, initial=0.0)
    stored = tr.states[:, 0] + model.intestine_mass(tr.states)
    delivered = np.where(tr.times >= 0, D / 2, 0) + np.clip((tr.times - 120.0) / 15.0, 0, 1) * D / 2
    # trapezoidal quadrature error of the cumulative integrals dominates
    assert np.max(np.abs(stored + absorbed + out - delivered)) <= max(tol, 5e-3) * D


def test_open_mode_linear_in_d():
    model = CstrPfrModel(P, Open())
    a = simulate(model, MealSchedule.single(45000.0), 900.0).outputs
    b = simulate(model, MealSchedule.single(90000.0), 900.0).outputs
    assert np.max(np.abs(b - 2 * a)) <= 1e-5 * b.max()


def test_moxon_cap_bound():
    mode = Moxon()
    peak = simulate(CstrPfrModel(P, mode), MealSchedule.single(180000.0), 900.0).outputs.max()
    assert peak <= mode.R_A_max * (1 + 5 / (mode.sigma * mode.R_A_max))


def test_spectral_overshoot_reported():
    model = CstrPfrModel(P, Open(), scheme="sg", resolution=16)
    tr = simulate(model, MealSchedule.single(90000.0), 300.0)
    ov = model.negative_overshoot(tr.states)
    assert -1.0 < ov <= 0.0
    assert CstrPfrModel(P, Open()).negative_overshoot(
        simulate(CstrPfrModel(P, Open()), MealSchedule.single(9e4), 100.0).states) >= -1e-12


def test_custom_discretization_area_checked():
    from mealsim.discretization import FvGrid
    with pytest.raises(ValueError):
        CstrPfrModel(P, Open(), disc=FvGrid.uniform(0, 2.85, 10, 1.0))
