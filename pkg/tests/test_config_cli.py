import numpy as np
import pytest

from mealsim import MealSchedule, simulate
from mealsim.cli import main
from mealsim.config import ConfigError, parse_config
from mealsim.models import build_model
from mealsim.report import (ComparisonReport, count_local_maxima, emit_plot_script, read_csv, run_comparison,
                            write_csv)


def test_minimal_config_defaults():
    cfg = parse_config("[scenario]\nmodel = hovorka\n")
    assert [m.model_id for m in cfg.models] == ["hovorka"]
    assert cfg.horizon == 1440.0 and cfg.output_interval == 1.0
    assert cfg.per_kg is False and len(cfg.schedule) == 0
    assert cfg.carbs == (45000.0, 90000.0, 180000.0)


def test_typo_suggestion_and_line_number():
    text = "[scenario]\nmodel = hovorka\n\n[hovorka]\nf = 0.8\ntau_d_ = 30\n"
    with pytest.raises(ConfigError) as exc:
        parse_config(text, "s.ini")
    msg = str(exc.value)
    assert msg.startswith("s.ini:6:")
    assert "did you mean 'tau_D'" in msg


def test_override_applied():
    cfg = parse_config("[scenario]\nmodel = hovorka\n[hovorka]\nf = 0.5\n")
    model = cfg.models[0].build()
    assert model.params.f == 0.5


def test_labelled_models_and_meals():
    text = ("[scenario]\nmodels = hovorka, fast\n[fast]\ntype = hovorka\ntau_d = 20\n"
            "[meals]\nlunch = 300, 60, 10\nbreakfast = 0, 45\n")
    cfg = parse_config(text)
    assert [m.label for m in cfg.models] == ["hovorka", "fast"]
    assert cfg.models[1].overrides == {"tau_D": 20.0}
    assert [e.time for e in cfg.schedule] == [0.0, 300.0]
    assert cfg.schedule.total_carbs == pytest.approx(105000.0)


@pytest.mark.parametrize("text,needle", [
    ("[scenario]\nmodel = hovorkah\n", "unknown model"),
    ("[scenario]\nmodel = hovorka\nhorizon = -5\n", ":3:"),
    ("[scenario]\nmodel = hovorka\nhorizn = 5\n", "did you mean 'horizon'"),
    ("[scenario]\nmodel = simo\n[hovorka]\nf = 1\n", "does not match"),
    ("[scenario]\nmodel = simo\n[meals]\nx = 0\n", "expected 'time_min"),
    ("[scenario]\nmodel = hovorka\n[hovorka]\nf = abc\n", "expected a number"),
    ("[scenario]\nmodel = hovorka\nscheme = fd\n", "fv or sg"),
    ("model = hovorka\n", "s.ini"),
    ("[other]\nx = 1\n", "missing [scenario]"),
])
def test_config_errors(text, needle):
    with pytest.raises(ConfigError, match=None) as exc:
        parse_config(text, "s.ini")
    assert needle in str(exc.value)


def test_csv_round_trip_bit_exact(tmp_path):
    tr = simulate(build_model("dalla_man"), MealSchedule.single(75000.0), 300.0)
    path = write_csv(tr, tmp_path / "t.csv", per_kg=True)
    header, data = read_csv(path)
    assert header[:3] == ["time_min", "R_A", "R_A_per_kg"]
    np.testing.assert_array_equal(data[:, 0], tr.times)
    np.testing.assert_array_equal(data[:, 1], tr.outputs)
    np.testing.assert_array_equal(data[:, 3:], tr.states)
    raw = path.read_bytes()
    assert b"\r" not in raw


def test_empty_report_header_only(tmp_path):
    path = write_csv(ComparisonReport(np.empty(0)), tmp_path / "e.csv")
    assert path.read_text() == "time_min\n"


def test_report_columns_and_determinism(tmp_path):
    models = [("hovorka", build_model("hovorka")), ("simo", build_model("simo"))]
    rep = run_comparison(models, [90000.0], horizon=240.0)
    a = write_csv(rep, tmp_path / "a.csv")
    header, data = read_csv(a)
    assert header == ["time_min", "hovorka_90g", "simo_90g"]
    rep2 = run_comparison(models, [90000.0], horizon=240.0, workers=2)
    b = write_csv(rep2, tmp_path / "b.csv")
    assert a.read_bytes() == b.read_bytes()


def test_per_kg_columns():
    models = [("hovorka", build_model("hovorka")), ("dalla_man", build_model("dalla_man"))]
    rep = run_comparison(models, [90000.0], horizon=240.0, per_kg=True)
    cols = rep.columns()
    assert set(cols) == {"hovorka_90g_per_kg", "dalla_man_90g_per_kg"}
    np.testing.assert_allclose(cols["hovorka_90g_per_kg"], rep.series["hovorka_90g"] / 82.0, rtol=1e-15)
    np.testing.assert_allclose(cols["dalla_man_90g_per_kg"], rep.series["dalla_man_90g"] / 91.0, rtol=1e-15)
    s = rep.summary("dalla_man", 90000.0)
    assert s.peak_per_kg == pytest.approx(s.peak / s.body_weight)


def test_plot_script_relative_path(tmp_path):
    rep = run_comparison([("simo", build_model("simo"))], [45000.0], horizon=60.0)
    (tmp_path / "data").mkdir()
    csv = write_csv(rep, tmp_path / "data" / "c.csv")
    gp = emit_plot_script(rep, tmp_path / "c.gp", csv)
    text = gp.read_text()
    assert "'data/c.csv' using 1:2" in text
    assert str(tmp_path) not in text


def test_local_maxima():
    assert count_local_maxima(np.zeros(100)) == 0
    t = np.linspace(0, 4 * np.pi, 2001)
    assert count_local_maxima(100 * np.sin(t)) == 2
    assert count_local_maxima(1e-5 * np.sin(t)) == 0
    rep = run_comparison([("hovorka", build_model("hovorka"))], [0.0], horizon=100.0)
    assert rep.summaries[0].n_maxima == 0 and rep.summaries[0].peak == 0.0


def test_cli_list_models(capsys):
    assert main(["list-models"]) == 0
    out = capsys.readouterr().out
    for mid in ("hovorka", "simo", "dalla_man", "alskar", "cstr_pfr_open"):
        assert mid in out


def test_cli_run(tmp_path, capsys):
    assert main(["run", "--model", "simo", "--carbs", "60", "--horizon", "120", "--out", str(tmp_path)]) == 0
    header, data = read_csv(tmp_path / "simo.csv")
    assert header[:2] == ["time_min", "R_A"] and data.shape[0] == 121


def test_cli_compare(tmp_path):
    argv = ["compare", "--model", "hovorka,cstr_pfr_open", "--carbs", "45,90", "--horizon", "200",
            "--out", str(tmp_path), "--jobs", "2"]
    assert main(argv) == 0
    header, _ = read_csv(tmp_path / "comparison.csv")
    assert len(header) == 5
    assert (tmp_path / "comparison.gp").exists() and (tmp_path / "summary.txt").exists()


def test_cli_config_file(tmp_path):
    ini = tmp_path / "s.ini"
    ini.write_text(f"[scenario]\nmodel = dalla_man\nhorizon = 90\nout = {tmp_path / 'o'}\n"
                   "[meals]\nm = 0, 50\n")
    assert main(["run", "--config", str(ini)]) == 0
    assert (tmp_path / "o" / "dalla_man.csv").exists()


def test_cli_check_linearity(capsys):
    assert main(["check-linearity", "--model", "simo", "--horizon", "300"]) == 0
    assert main(["check-linearity", "--model", "alskar", "--horizon", "300", "--strict"]) == 1
    assert "NONLINEAR" in capsys.readouterr().out


def test_cli_delay_demo(tmp_path):
    assert main(["delay-demo", "--out", str(tmp_path), "-M", "4"]) == 0
    header, data = read_csv(tmp_path / "delay_demo.csv")
    assert header == ["time_min", "u", "y_true", "y_lag", "y_pade", "y_transport", "y_algebraic"]
    assert np.all(data[:, 1] == 1.0)
    assert main(["delay-demo", "--out", str(tmp_path), "--input", "cosine"]) == 0


def test_cli_errors(tmp_path, capsys):
    assert main(["run", "--model", "nope"]) == 2
    ini = tmp_path / "bad.ini"
    ini.write_text("[scenario]\nmodel = hovorka\n[hovorka]\ntau_d_ = 3\n")
    assert main(["run", "--config", str(ini)]) == 2
    err = capsys.readouterr().err
    assert "bad.ini:4" in err and "tau_D" in err
    assert main(["run", "--model", "hovorka", "--set", "f=-1"]) == 2
