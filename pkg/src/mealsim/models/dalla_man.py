"""Three-compartment Dalla Man meal model.

The gastric emptying rate depends on the carbohydrate content D of the meal
being digested. For a sequence of meals D is reset at each meal start to the
new carbohydrate mass plus whatever is still in the stomach, and held until
the next meal.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..engine import MealContext, MealEvent, ModelInstance


@dataclass(frozen=True)
class DallaManParams:
    k_max: float = 0.0465
    k_min: float = 0.0076
    k_abs: float = 0.023
    k_gri: float = 0.0465
    b: float = 0.69
    c: float = 0.17
    f: float = 0.90
    BW: float = 91.0

    def __post_init__(self):
        if not 0 < self.k_min <= self.k_max:
            raise ValueError("need 0 < k_min <= k_max")
        if not (self.k_abs > 0 and self.k_gri > 0):
            raise ValueError("k_abs and k_gri must be positive")
        if not 0 < self.c < self.b < 1:
            raise ValueError("need 0 < c < b < 1")
        if not 0 < self.f <= 1:
            raise ValueError("f must lie in (0, 1]")
        if not self.BW > 0:
            raise ValueError("BW must be positive")


def dalla_man_kempt(Q_sto: float, D: float, p: DallaManParams = DallaManParams()) -> float:
    """Gastric emptying rate (1/min) for stomach content ``Q_sto`` of a meal ``D`` (mg)."""
    if not D > 0:
        raise ValueError(f"carbohydrate content D must be positive, got {D}")
    alpha = 5.0 / (2.0 * D * (1.0 - p.b))
    beta = 5.0 / (2.0 * D * p.c)
    return p.k_min + 0.5 * (p.k_max - p.k_min) * (
        math.tanh(alpha * (Q_sto - p.b * D)) - math.tanh(beta * (Q_sto - p.c * D)) + 2.0
    )


class DallaManModel(ModelInstance):
    name = "dalla_man"
    state_labels = ("Q_sto1", "Q_sto2", "Q_gut")
    linear_in_d = True

    def __init__(self, params: DallaManParams = DallaManParams()):
        self.params = params
        self.body_weight = params.BW

    def kempt(self, Q_sto: float, D: float) -> float:
        # no meal yet: every flow is zero from the zero state, so any finite rate works
        if D <= 0:
            return self.params.k_min
        return dalla_man_kempt(Q_sto, D, self.params)

    def rhs(self, t, x, d, ctx: MealContext):
        p = self.params
        q1, q2, qg = x
        r12 = p.k_gri * q1
        r_empt = self.kempt(q1 + q2, ctx.carbs) * q2
        r_abs = p.k_abs * qg
        return np.array([d - r12, r12 - r_empt, r_empt - r_abs])

    def output(self, x):
        return self.params.f * self.params.k_abs * np.asarray(x)[..., 2]

    def injection(self, x):
        return np.array([1.0, 0.0, 0.0])

    def begin_meal(self, x, event: MealEvent, ctx: MealContext) -> MealContext:
        return MealContext(t_meal=event.time, carbs=event.carbs + float(x[0] + x[1]))


def dalla_man_rhs(state, d: float, D: float, p: DallaManParams = DallaManParams()) -> np.ndarray:
    return DallaManModel(p).rhs(0.0, np.asarray(state, dtype=float), d, MealContext(carbs=D))


def dalla_man_output(state, p: DallaManParams = DallaManParams()) -> float:
    return float(DallaManModel(p).output(np.asarray(state, dtype=float)))
