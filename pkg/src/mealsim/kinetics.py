"""Stoichiometric production rates, CSTR balances and the PFR flux law."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "StoichiometricSystem",
    "CstrSpec",
    "PfrFluxSpec",
    "production_rates",
    "cstr_rhs",
    "pfr_flux",
]


@dataclass(frozen=True)
class StoichiometricSystem:
    """Reaction network: ``S`` is ``n_reactions x n_components``, ``rate_fn(c)`` gives the reaction rates."""

    S: np.ndarray
    rate_fn: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        S = np.atleast_2d(np.asarray(self.S, dtype=float))
        S.setflags(write=False)
        object.__setattr__(self, "S", S)

    @property
    def n_reactions(self) -> int:
        return self.S.shape[0]

    @property
    def n_components(self) -> int:
        return self.S.shape[1]


@dataclass(frozen=True)
class CstrSpec:
    V: float
    F: float
    c_in: np.ndarray

    def __post_init__(self):
        if not self.V > 0:
            raise ValueError("CSTR volume must be positive")
        if not self.F >= 0:
            raise ValueError("CSTR flow must be non-negative")
        object.__setattr__(self, "c_in", np.atleast_1d(np.asarray(self.c_in, dtype=float)))


@dataclass(frozen=True)
class PfrFluxSpec:
    v: float
    D_c: float = 0.0

    def __post_init__(self):
        if not self.D_c >= 0:
            raise ValueError("diffusion coefficient must be non-negative")


def production_rates(sys: StoichiometricSystem, c) -> np.ndarray:
    """Component production rates ``S^T r(c)``."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    if c.size != sys.n_components:
        raise ValueError(f"expected {sys.n_components} concentrations, got {c.size}")
    r = np.atleast_1d(np.asarray(sys.rate_fn(c), dtype=float))
    if r.size != sys.n_reactions:
        raise ValueError(f"rate function returned {r.size} rates for {sys.n_reactions} reactions")
    return sys.S.T @ r


def cstr_rhs(spec: CstrSpec, c, R) -> np.ndarray:
    c = np.atleast_1d(np.asarray(c, dtype=float))
    R = np.atleast_1d(np.asarray(R, dtype=float))
    if not (c.shape == spec.c_in.shape == R.shape):
        raise ValueError("c, c_in and R must have the same length")
    return (spec.c_in - c) * (spec.F / spec.V) + R


def pfr_flux(spec: PfrFluxSpec, c, dc_dz):
    """Advective plus Fickian flux ``v c - D_c dc/dz``."""
    return spec.v * np.asarray(c) - spec.D_c * np.asarray(dc_dz)
