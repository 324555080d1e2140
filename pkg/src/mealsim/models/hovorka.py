"""Two-compartment gut absorption model (Hovorka)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..engine import LinearModel, LinearRealization


@dataclass(frozen=True)
class HovorkaParams:
    A_G: float = 0.8
    tau_D: float = 40.0  # min
    f: float = 1.0
    BW: float = 82.0  # kg

    def __post_init__(self):
        if not 0 < self.A_G <= 1:
            raise ValueError("A_G must lie in (0, 1]")
        if not self.tau_D > 0:
            raise ValueError("tau_D must be positive")
        if not 0 < self.f <= 1:
            raise ValueError("f must lie in (0, 1]")
        if not self.BW > 0:
            raise ValueError("BW must be positive")


def hovorka_realization(p: HovorkaParams = HovorkaParams()) -> LinearRealization:
    k = 1.0 / p.tau_D
    return LinearRealization(
        A=np.array([[-k, 0.0], [k, -k]]),
        B=np.array([[p.A_G], [0.0]]),
        C=np.array([[0.0, p.f * k]]),
        labels=("D1", "D2"),
    )


class HovorkaModel(LinearModel):
    def __init__(self, params: HovorkaParams = HovorkaParams()):
        super().__init__(hovorka_realization(params), name="hovorka",
                         state_labels=("D1", "D2"), body_weight=params.BW)
        self.params = params
