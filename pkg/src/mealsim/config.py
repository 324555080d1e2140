"""Scenario files: INI-style key/value text with one section per concern.

Example::

    [scenario]
    model = hovorka            ; or: models = hovorka, simo, open
    horizon = 1440             ; min
    output_interval = 1        ; min
    per_kg = no
    scheme = fv                ; CSTR-PFR only: fv | sg
    resolution = 100
    carbs = 45, 90, 180        ; g, used by `compare` and `check-linearity`

    [meals]
    breakfast = 0, 90          ; time [min], carbohydrate [g][, duration [min]]

    [hovorka]
    f = 0.5

    [open]                     ; a labelled model section needs a type
    type = cstr_pfr_open
    v_p = 0.011

Carbohydrate masses are given in grams and stored in mg.
"""
from __future__ import annotations

import configparser
import difflib
import re
from dataclasses import dataclass, field
from pathlib import Path

from .engine import IntegratorOptions, MealEvent, MealSchedule, ModelInstance
from .models import CATALOG, build_model, parameter_names

__all__ = ["ConfigError", "ModelConfig", "ScenarioConfig", "load_config", "parse_config",
           "parse_carbs", "MG_PER_G", "DEFAULT_CARBS_G"]

MG_PER_G = 1000.0
DEFAULT_CARBS_G = (45.0, 90.0, 180.0)

SCENARIO_KEYS = ("model", "models", "horizon", "output_interval", "per_kg", "scheme",
                 "resolution", "carbs", "out", "rel_tol", "abs_tol", "max_step")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ModelConfig:
    label: str
    model_id: str
    overrides: dict = field(default_factory=dict)

    def build(self, scheme: str = "fv", resolution: int | None = None) -> ModelInstance:
        return build_model(self.model_id, self.overrides, scheme=scheme, resolution=resolution)


@dataclass
class ScenarioConfig:
    models: list[ModelConfig]
    schedule: MealSchedule
    horizon: float = 1440.0
    output_interval: float = 1.0
    scheme: str = "fv"
    resolution: int | None = None
    per_kg: bool = False
    carbs: tuple[float, ...] = tuple(c * MG_PER_G for c in DEFAULT_CARBS_G)  # mg
    out: str | None = None
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step: float = 5.0
    source: str = "<string>"

    @property
    def options(self) -> IntegratorOptions:
        return IntegratorOptions(self.rel_tol, self.abs_tol, self.max_step, self.output_interval)


def _line_index(text: str) -> dict[tuple[str, str | None], int]:
    """(section, key) -> 1-based line number; key None for the header line."""
    lines: dict[tuple[str, str | None], int] = {}
    section = None
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s[0] in "#;":
            continue
        m = re.match(r"\[([^\]]+)\]", s)
        if m:
            section = m.group(1).strip()
            lines.setdefault((section, None), no)
            continue
        m = re.match(r"([^=:]+?)\s*[=:]", s)
        if m and section is not None:
            lines.setdefault((section, m.group(1).strip()), no)
    return lines


class _Diag:
    def __init__(self, source: str, lines):
        self.source = source
        self.lines = lines

    def error(self, section: str, key: str | None, msg: str, candidates=()) -> ConfigError:
        no = self.lines.get((section, key)) or self.lines.get((section, None))
        where = f"{self.source}:{no}" if no else self.source
        field_ = f"[{section}]" + (f" {key}" if key else "")
        hint = ""
        if key is not None and candidates:
            close = difflib.get_close_matches(key.lower(), [c.lower() for c in candidates], n=1, cutoff=0.5)
            if close:
                original = {c.lower(): c for c in candidates}[close[0]]
                hint = f"; did you mean {original!r}?"
        return ConfigError(f"{where}: {field_}: {msg}{hint}")


def _number(diag, section, key, raw, positive=False) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise diag.error(section, key, f"expected a number, got {raw!r}") from None
    if positive and not value > 0:
        raise diag.error(section, key, f"must be positive, got {raw}")
    return value


def parse_carbs(raw: str) -> tuple[float, ...]:
    """Comma-separated grams -> mg."""
    return tuple(float(x) * MG_PER_G for x in raw.replace(";", ",").split(",") if x.strip())


def _model_config(cp, diag, label: str) -> ModelConfig:
    model_id = label.lower()
    overrides: dict[str, float] = {}
    if cp.has_section(label):
        sec = cp[label]
        if "type" in sec:
            model_id = sec["type"].strip().lower()
        if model_id not in CATALOG:
            raise diag.error(label, "type" if "type" in sec else None,
                             f"unknown model {model_id!r}", sorted(CATALOG))
        names = parameter_names(model_id)
        for key, raw in sec.items():
            if key == "type":
                continue
            if key.lower() not in names:
                raise diag.error(label, key, f"unknown parameter for {model_id}",
                                 [v[1] for v in names.values()])
            overrides[names[key.lower()][1]] = _number(diag, label, key, raw)
    elif model_id not in CATALOG:
        key = "models" if "models" in cp["scenario"] else "model"
        raise diag.error("scenario", key, f"unknown model {label!r}", sorted(CATALOG))
    try:
        build_model(model_id, overrides)
    except ValueError as exc:
        raise diag.error(label, None, str(exc)) from None
    return ModelConfig(label, model_id, overrides)


def _meals(cp, diag) -> MealSchedule:
    if not cp.has_section("meals"):
        return MealSchedule()
    events = []
    for label, raw in cp["meals"].items():
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) not in (2, 3):
            raise diag.error("meals", label, "expected 'time_min, carbs_g[, duration_min]'")
        t, g = (_number(diag, "meals", label, p) for p in parts[:2])
        dur = _number(diag, "meals", label, parts[2]) if len(parts) == 3 else 0.0
        if g < 0 or dur < 0:
            raise diag.error("meals", label, "carbohydrate and duration must be non-negative")
        events.append(MealEvent(t, g * MG_PER_G, dur))
    events.sort(key=lambda e: e.time)
    try:
        return MealSchedule(tuple(events))
    except ValueError as exc:
        raise diag.error("meals", None, str(exc)) from None


def parse_config(text: str, source: str = "<string>") -> ScenarioConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(f"{source}: {exc}") from None
    diag = _Diag(source, _line_index(text))
    if not cp.has_section("scenario"):
        raise ConfigError(f"{source}: missing [scenario] section")
    sc = cp["scenario"]
    for key in sc:
        if key not in SCENARIO_KEYS:
            raise diag.error("scenario", key, "unknown key", SCENARIO_KEYS)

    labels = [s.strip() for s in sc.get("models", sc.get("model", "")).split(",") if s.strip()]
    if not labels:
        raise diag.error("scenario", None, "no model given (use 'model = <id>')")
    models = [_model_config(cp, diag, label) for label in labels]
    for section in cp.sections():
        if section not in ("scenario", "meals") and section not in labels:
            raise diag.error(section, None, "section does not match any model listed in [scenario]",
                             labels)

    cfg = ScenarioConfig(models=models, schedule=_meals(cp, diag), source=source)
    if "horizon" in sc:
        cfg.horizon = _number(diag, "scenario", "horizon", sc["horizon"], positive=True)
    for key in ("output_interval", "rel_tol", "abs_tol", "max_step"):
        if key in sc:
            setattr(cfg, key, _number(diag, "scenario", key, sc[key], positive=True))
    if "per_kg" in sc:
        try:
            cfg.per_kg = sc.getboolean("per_kg")
        except ValueError:
            raise diag.error("scenario", "per_kg", f"expected yes/no, got {sc['per_kg']!r}") from None
    if "scheme" in sc:
        cfg.scheme = sc["scheme"].strip().lower()
        if cfg.scheme not in ("fv", "sg"):
            raise diag.error("scenario", "scheme", f"expected fv or sg, got {sc['scheme']!r}")
    if "resolution" in sc:
        res = _number(diag, "scenario", "resolution", sc["resolution"], positive=True)
        if res != int(res):
            raise diag.error("scenario", "resolution", "must be an integer")
        cfg.resolution = int(res)
    if "carbs" in sc:
        try:
            cfg.carbs = parse_carbs(sc["carbs"])
        except ValueError:
            raise diag.error("scenario", "carbs", "expected comma-separated grams") from None
    if "out" in sc:
        cfg.out = sc["out"].strip()
    return cfg


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    return parse_config(path.read_text(encoding="utf-8"), source=str(path))
