"""Four-compartment Alskär model with Hill-type gastric feedback.

The gastric emptying lag uses the time since the most recent meal started,
so every meal gets its own lag.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._util import hill_complement, logistic
from ..engine import MealContext, ModelInstance


@dataclass(frozen=True)
class AlskarParams:
    k_w: float = 0.14
    IG_D50: float = 7420.0
    gamma: float = 14.0
    L_D: float = 0.08
    L_J: float = 0.37
    T: float = 240.0
    sigma: float = 10.0
    t_50: float = 5.0
    K_mG: float = 6320.0
    R_Dmax: float = 580.0
    R_Jmax: float = 2060.0
    R_Imax: float = 1330.0
    F_P: float = 1.0
    BW: float = 82.0

    def __post_init__(self):
        if not (self.L_D > 0 and self.L_J > 0 and self.L_D + self.L_J < 1):
            raise ValueError("need L_D > 0, L_J > 0 and L_D + L_J < 1")
        if not self.gamma >= 1:
            raise ValueError("gamma must be >= 1")
        for name in ("k_w", "IG_D50", "T", "sigma", "K_mG", "R_Dmax", "R_Jmax", "R_Imax", "BW"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.F_P <= 1:
            raise ValueError("F_P must lie in (0, 1]")


class AlskarModel(ModelInstance):
    name = "alskar"
    state_labels = ("G_S", "G_D", "G_J", "G_I")

    def __init__(self, params: AlskarParams = AlskarParams()):
        self.params = params
        self.body_weight = params.BW
        self.k_dj = 1.0 / (params.L_D * params.T)
        self.k_ji = 1.0 / (params.L_J * params.T)

    def k_sd(self, G_D: float) -> float:
        p = self.params
        return p.k_w * hill_complement(G_D, p.IG_D50, p.gamma)

    def lag(self, t_since_meal: float) -> float:
        p = self.params
        return logistic(p.sigma * (t_since_meal - p.t_50))

    def absorption(self, x):
        """Michaelis-Menten absorption rates (duodenum, jejunum, ileum) in mg/min."""
        p = self.params
        x = np.asarray(x, dtype=float)
        g_d, g_j, g_i = x[..., 1], x[..., 2], x[..., 3]
        return (p.R_Dmax * g_d / (p.K_mG + g_d),
                p.R_Jmax * g_j / (p.K_mG + g_j),
                p.R_Imax * g_i / (p.K_mG + g_i))

    def rhs(self, t, x, d, ctx: MealContext):
        p = self.params
        g_s, g_d, g_j, g_i = x
        r_sd = self.k_sd(g_d) * self.lag(t - ctx.t_meal) * g_s
        r_dj = self.k_dj * g_d
        r_ji = self.k_ji * g_j
        km = p.K_mG
        ra_d = p.R_Dmax * g_d / (km + g_d)
        ra_j = p.R_Jmax * g_j / (km + g_j)
        ra_i = p.R_Imax * g_i / (km + g_i)
        return np.array([d - r_sd, r_sd - r_dj - ra_d, r_dj - r_ji - ra_j, r_ji - ra_i])

    def output(self, x):
        ra_d, ra_j, ra_i = self.absorption(x)
        return self.params.F_P * (ra_d + ra_j + ra_i)

    def injection(self, x):
        return np.array([1.0, 0.0, 0.0, 0.0])


def alskar_rhs(state, d: float, t_since_meal: float, p: AlskarParams = AlskarParams()) -> np.ndarray:
    return AlskarModel(p).rhs(t_since_meal, np.asarray(state, dtype=float), d, MealContext(t_meal=0.0))


def alskar_output(state, p: AlskarParams = AlskarParams()) -> float:
    return float(AlskarModel(p).output(np.asarray(state, dtype=float)))
