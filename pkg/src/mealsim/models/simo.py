"""SIMO four-compartment model (stomach, jejunum, delay compartment, ileum)."""
from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from ..engine import LinearModel, LinearRealization


@dataclass(frozen=True)
class SimoParams:
    k_js: float = 0.026
    k_rj: float = 0.033
    k_lr: float = 0.030
    k_gj: float = 0.036
    k_gl: float = 0.027
    f: float = 1.0
    BW: float = 82.0

    def __post_init__(self):
        for fld in fields(self):
            if fld.name.startswith("k_") and not getattr(self, fld.name) > 0:
                raise ValueError(f"{fld.name} must be positive")
        if not 0 < self.f <= 1:
            raise ValueError("f must lie in (0, 1]")
        if not self.BW > 0:
            raise ValueError("BW must be positive")


def simo_realization(p: SimoParams = SimoParams()) -> LinearRealization:
    A = np.array([
        [-p.k_js, 0.0, 0.0, 0.0],
        [p.k_js, -(p.k_gj + p.k_rj), 0.0, 0.0],
        [0.0, p.k_rj, -p.k_lr, 0.0],
        [0.0, 0.0, p.k_lr, -p.k_gl],
    ])
    B = np.array([[1.0], [0.0], [0.0], [0.0]])
    C = np.array([[0.0, p.f * p.k_gj, 0.0, p.f * p.k_gl]])
    return LinearRealization(A, B, C, labels=("S", "J", "R", "L"))


class SimoModel(LinearModel):
    def __init__(self, params: SimoParams = SimoParams()):
        super().__init__(simo_realization(params), name="simo",
                         state_labels=("S", "J", "R", "L"), body_weight=params.BW)
        self.params = params
