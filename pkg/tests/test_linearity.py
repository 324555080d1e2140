import numpy as np
import pytest

from mealsim import MealEvent, MealSchedule, simulate
from mealsim.linearity import NotLinearInD, ScheduleShape, normalize, scale_response, verify_d_linearity
from mealsim.models import build_model

G = 1000.0
CARBS = (45 * G, 90 * G, 180 * G)


def test_shape_validation():
    with pytest.raises(ValueError):
        ScheduleShape(MealSchedule.single(2.0))
    s = ScheduleShape.from_schedule(MealSchedule((MealEvent(0, 30.0), MealEvent(60, 10.0, 5.0))))
    assert s.schedule.total_carbs == pytest.approx(1.0)
    assert "5min" in s.descriptor


def test_scale_identity_and_zero():
    run = normalize(build_model("simo"), ScheduleShape.impulse(), 600.0)
    one = scale_response(run, 1.0)
    np.testing.assert_array_equal(one.outputs, run.base.outputs)
    zero = scale_response(run, 0.0)
    assert np.all(zero.outputs == 0.0) and np.all(zero.states == 0.0)


def test_scale_matches_direct_hovorka():
    model = build_model("hovorka")
    run = normalize(model, ScheduleShape.impulse(), 1440.0)
    direct = simulate(model, MealSchedule.single(90 * G), 1440.0)
    scaled = scale_response(run, 90 * G)
    assert np.max(np.abs(scaled.outputs - direct.outputs)) <= 1e-6 * direct.outputs.max()
    np.testing.assert_allclose(scaled.states, direct.states, rtol=1e-6, atol=1e-6)


def test_scale_rejects_nonlinear_models():
    for mid in ("alskar", "cstr_pfr_moxon", "cstr_pfr_alskar"):
        run = normalize(build_model(mid), ScheduleShape.impulse(), 50.0)
        with pytest.raises(NotLinearInD, match="not linear in D"):
            scale_response(run, 1e4)


def test_duration_scaling_flag():
    shape = ScheduleShape(MealSchedule.single(1.0, 0.0, 10.0), duration_scales=True)
    run = normalize(build_model("hovorka"), shape, 100.0)
    with pytest.raises(NotLinearInD):
        scale_response(run, 2.0)


def test_verify_simo():
    rep = verify_d_linearity(build_model("simo"), ScheduleShape.impulse(), CARBS)
    assert rep.max_deviation < 1e-6 and rep.linear


def test_verify_dalla_man():
    rep = verify_d_linearity(build_model("dalla_man"), ScheduleShape.impulse(), CARBS, workers=3)
    assert rep.max_deviation < 1e-5


def test_verify_alskar_flagged():
    rep = verify_d_linearity(build_model("alskar"), ScheduleShape.impulse(), CARBS)
    assert all(r.deviation > 1e-2 for r in rep.rows)
    assert rep.verdict == "NONLINEAR"
    assert "NONLINEAR" in rep.format_table()


def test_verify_step_shape():
    shape = ScheduleShape.from_schedule(MealSchedule((MealEvent(0, 2.0, 15.0), MealEvent(240, 1.0))))
    rep = verify_d_linearity(build_model("dalla_man"), shape, CARBS, horizon=900.0)
    assert rep.linear


def test_verify_needs_two_sizes():
    with pytest.raises(ValueError):
        verify_d_linearity(build_model("simo"), ScheduleShape.impulse(), [1.0])
