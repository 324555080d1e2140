"""Meal models and the built-in catalog of default parameter sets."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Any, Callable

from ..engine import ModelInstance
from .alskar import AlskarModel, AlskarParams, alskar_output, alskar_rhs
from .cstr_pfr import (Alskar, CstrPfrModel, CstrPfrParams, Moxon, Open, cstr_pfr_rhs, k_sd_alskar,
                       k_sd_moxon, make_discretization, rate_of_appearance)
from .dalla_man import DallaManModel, DallaManParams, dalla_man_kempt, dalla_man_output, dalla_man_rhs
from .hovorka import HovorkaModel, HovorkaParams, hovorka_realization
from .simo import SimoModel, SimoParams, simo_realization

__all__ = [
    "AlskarModel", "AlskarParams", "alskar_output", "alskar_rhs",
    "Alskar", "CstrPfrModel", "CstrPfrParams", "Moxon", "Open", "cstr_pfr_rhs", "k_sd_alskar",
    "k_sd_moxon", "make_discretization", "rate_of_appearance",
    "DallaManModel", "DallaManParams", "dalla_man_kempt", "dalla_man_output", "dalla_man_rhs",
    "HovorkaModel", "HovorkaParams", "hovorka_realization",
    "SimoModel", "SimoParams", "simo_realization",
    "CatalogEntry", "CATALOG", "build_model", "parameter_names",
]


@dataclass(frozen=True)
class CatalogEntry:
    model_id: str
    title: str
    params: tuple[type, ...]
    equation_types: str
    n_states: str
    linear: str
    linear_in_d: str
    factory: Callable[..., ModelInstance]


def _cstr(params, mode, scheme="fv", resolution=None):
    return CstrPfrModel(params, mode, scheme=scheme, resolution=resolution)


CATALOG: dict[str, CatalogEntry] = {
    "hovorka": CatalogEntry("hovorka", "Hovorka", (HovorkaParams,), "ODEs", "2", "Yes", "Yes",
                            lambda p, **_: HovorkaModel(p)),
    "dalla_man": CatalogEntry("dalla_man", "Dalla Man", (DallaManParams,), "ODEs", "3", "No", "Yes",
                              lambda p, **_: DallaManModel(p)),
    "simo": CatalogEntry("simo", "SIMO", (SimoParams,), "ODEs", "4", "Yes", "Yes",
                         lambda p, **_: SimoModel(p)),
    "alskar": CatalogEntry("alskar", "Alskär", (AlskarParams,), "ODEs", "4", "No", "No",
                           lambda p, **_: AlskarModel(p)),
    "cstr_pfr_open": CatalogEntry("cstr_pfr_open", "CSTR-PFR (open pylorus)", (CstrPfrParams, Open),
                                  "ODEs and PDEs", "1 + M", "Yes", "Yes", _cstr),
    "cstr_pfr_moxon": CatalogEntry("cstr_pfr_moxon", "CSTR-PFR (Moxon feedback)",
                                   (CstrPfrParams, Moxon), "ODEs and PDEs", "1 + M", "No", "No",
                                   _cstr),
    "cstr_pfr_alskar": CatalogEntry("cstr_pfr_alskar", "CSTR-PFR (Alskär feedback)",
                                    (CstrPfrParams, Alskar), "ODEs and PDEs", "1 + M", "No", "No",
                                    _cstr),
}
# the bare id picks the open pylorus
CATALOG["cstr_pfr"] = replace(CATALOG["cstr_pfr_open"], model_id="cstr_pfr")


def parameter_names(model_id: str) -> dict[str, tuple[int, str]]:
    """Case-folded parameter name -> (index of params class, canonical name)."""
    entry = CATALOG[model_id]
    out: dict[str, tuple[int, str]] = {}
    for i, cls in enumerate(entry.params):
        for f in fields(cls):
            out.setdefault(f.name.lower(), (i, f.name))
    return out


def build_model(model_id: str, overrides: dict[str, Any] | None = None, scheme: str = "fv",
                resolution: int | None = None) -> ModelInstance:
    """Instantiate a catalog model with its default parameter set and optional overrides.

    Override keys are matched case-insensitively against the parameter
    names; unknown keys raise ``KeyError``.
    """
    if model_id not in CATALOG:
        raise KeyError(model_id)
    entry = CATALOG[model_id]
    names = parameter_names(model_id)
    per_class: list[dict[str, Any]] = [{} for _ in entry.params]
    for key, value in (overrides or {}).items():
        hit = names.get(key.lower())
        if hit is None:
            raise KeyError(key)
        per_class[hit[0]][hit[1]] = float(value)
    objs = [cls(**kw) for cls, kw in zip(entry.params, per_class)]
    return entry.factory(*objs, scheme=scheme, resolution=resolution)
