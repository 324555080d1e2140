"""Stomach as a stirred tank, small intestine as a plug-flow reactor.

The stomach mass ``m_s`` empties at rate ``k_sd * m_s`` into the intestine
inlet. Three pylorus descriptions are available: a constant rate (open),
Moxon's feedback on the rate of appearance, and Alskär's Hill feedback on
the duodenal glucose mass. Intestinal degrees of freedom are cell masses
(finite volume) or nodal concentrations (spectral Galerkin).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .._util import hill_complement, logistic
from ..discretization import FvGrid, SpectralDiscretization
from ..engine import MealContext, ModelInstance

DUODENUM_FRACTION = 0.08


@dataclass(frozen=True)
class CstrPfrParams:
    z0: float = 0.0  # m
    zf: float = 2.85  # m
    v_p: float = 0.0102  # m/min
    D_p: float = 1e-4  # m^2/min
    r_si: float = 0.018  # m
    f: float = 12.0
    v_a: float = 6.4392e-6  # m/min
    BW: float = 82.0

    def __post_init__(self):
        if not self.zf > self.z0:
            raise ValueError("need zf > z0")
        if not (self.r_si > 0 and self.f > 0 and self.v_a >= 0 and self.BW > 0):
            raise ValueError("r_si, f and BW must be positive and v_a non-negative")
        if not self.D_p >= 0:
            raise ValueError("D_p must be non-negative")

    @property
    def A_si(self) -> float:
        return math.pi * self.r_si ** 2

    @property
    def z_d(self) -> float:
        return self.z0 + DUODENUM_FRACTION * (self.zf - self.z0)

    @property
    def absorption_rate(self) -> float:
        """First-order absorption constant ``2 f v_a / r_si`` (1/min)."""
        return 2.0 * self.f * self.v_a / self.r_si


@dataclass(frozen=True)
class Open:
    k_sd: float = 0.06

    def __post_init__(self):
        if not self.k_sd > 0:
            raise ValueError("k_sd must be positive")


@dataclass(frozen=True)
class Moxon:
    k_sd_max: float = 0.0554
    R_A_max: float = 420.0
    sigma: float = 0.1

    def __post_init__(self):
        if not (self.k_sd_max > 0 and self.R_A_max > 0 and self.sigma > 0):
            raise ValueError("Moxon parameters must be positive")


@dataclass(frozen=True)
class Alskar:
    k_sd_min: float = 0.0116
    k_sd_max: float = 0.14
    m_d50: float = 7420.0
    gamma: float = 14.0

    def __post_init__(self):
        if not (self.k_sd_min > 0 and self.k_sd_max > 0 and self.m_d50 > 0 and self.gamma > 0):
            raise ValueError("Alskär pylorus parameters must be positive")
        if self.k_sd_min > self.k_sd_max:
            raise ValueError("need k_sd_min <= k_sd_max")


PylorusMode = Union[Open, Moxon, Alskar]
Discretization = Union[FvGrid, SpectralDiscretization]


def k_sd_moxon(R_A: float, mode: Moxon = Moxon()) -> float:
    return mode.k_sd_max * logistic(-mode.sigma * (R_A - mode.R_A_max))


def k_sd_alskar(m_d: float, mode: Alskar = Alskar()) -> float:
    return mode.k_sd_min + (mode.k_sd_max - mode.k_sd_min) * hill_complement(m_d, mode.m_d50, mode.gamma)


def make_discretization(scheme: str, resolution: int | None, p: CstrPfrParams) -> Discretization:
    scheme = scheme.lower()
    if scheme == "fv":
        return FvGrid.uniform(p.z0, p.zf, resolution or 100, p.A_si)
    if scheme == "sg":
        return SpectralDiscretization.legendre_lobatto(p.z0, p.zf, resolution or 32, p.A_si)
    raise ValueError(f"unknown scheme {scheme!r}; expected 'fv' or 'sg'")


class CstrPfrModel(ModelInstance):
    """State ``(m_s, intestine dofs...)``; output is R_A in mg/min."""

    equation_types = "ODEs and PDEs"

    def __init__(self, params: CstrPfrParams = CstrPfrParams(), mode: PylorusMode = Open(),
                 disc: Discretization | None = None, scheme: str = "fv",
                 resolution: int | None = None):
        self.params = params
        self.mode = mode
        self.disc = disc if disc is not None else make_discretization(scheme, resolution, params)
        if not math.isclose(self.disc.area, params.A_si):
            raise ValueError("discretization cross-section differs from pi * r_si^2")
        self.scheme = "fv" if isinstance(self.disc, FvGrid) else "sg"
        self.name = f"cstr_pfr_{type(mode).__name__.lower()}"
        self.body_weight = params.BW
        self.linear_in_d = isinstance(mode, Open)
        n = self.disc.n_dofs
        self.state_labels = ("m_s",) + tuple(f"{'m' if self.scheme == 'fv' else 'c'}{i}" for i in range(n))
        self._ka = params.absorption_rate
        self._ra_weights = np.ascontiguousarray(self._ka * self.disc.mass_weights)
        self._md_weights = np.ascontiguousarray(self.disc.partial_mass_weights(params.z_d))
        self._e0 = np.zeros(n + 1)
        self._e0[0] = 1.0

    def k_sd(self, dofs) -> float:
        mode = self.mode
        if isinstance(mode, Open):
            return mode.k_sd
        if isinstance(mode, Moxon):
            return k_sd_moxon(float(self._ra_weights @ dofs), mode)
        return k_sd_alskar(float(self._md_weights @ dofs), mode)

    def rhs(self, t, x, d, ctx: MealContext):
        p = self.params
        dofs = x[1:]
        f_sd = self.k_sd(dofs) * x[0]
        out = np.empty_like(x)
        out[0] = d - f_sd
        out[1:] = self.disc.rhs(dofs, f_sd, p.v_p, p.D_p, self._ka)
        return out

    def output(self, x):
        return np.asarray(x)[..., 1:] @ self._ra_weights

    def injection(self, x):
        return self._e0

    def intestine_mass(self, x):
        return np.asarray(x)[..., 1:] @ self.disc.mass_weights

    def duodenum_mass(self, x):
        return np.asarray(x)[..., 1:] @ self._md_weights

    def outlet_flow(self, x):
        return self.disc.outlet_flow(np.asarray(x)[..., 1:], self.params.v_p)

    def negative_overshoot(self, states) -> float:
        """Most negative intestinal concentration relative to the peak concentration."""
        c = self.disc.concentration_view(np.asarray(states)[..., 1:])
        peak = float(np.max(np.abs(c), initial=0.0))
        return 0.0 if peak == 0.0 else float(min(np.min(c), 0.0)) / peak


def rate_of_appearance(dofs, disc: Discretization, p: CstrPfrParams = CstrPfrParams()) -> float:
    """``A_si * int (2 f / r_si) v_a c dz`` from the intestinal degrees of freedom."""
    return p.absorption_rate * float(disc.mass_weights @ np.asarray(dofs, dtype=float))


def cstr_pfr_rhs(state, disc: Discretization, mode: PylorusMode, d: float,
                 p: CstrPfrParams = CstrPfrParams()) -> np.ndarray:
    model = CstrPfrModel(p, mode, disc)
    return model.rhs(0.0, np.ascontiguousarray(state, dtype=float), d, MealContext())
