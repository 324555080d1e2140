"""Finite-volume discretization of the 1-D plug-flow reactor."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import kernels
from ..kinetics import PfrFluxSpec

__all__ = ["FvGrid", "fv_semidiscretize", "fv_partial_integral", "fv_partial_weights"]


@dataclass(frozen=True, eq=False)
class FvGrid:
    """Cells ``[edges[i], edges[i+1]]`` of a cylinder with cross-section ``area``."""

    edges: np.ndarray
    area: float = 1.0

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=float)
        if e.ndim != 1 or e.size < 3:
            raise ValueError("a finite-volume grid needs at least 2 cells")
        if np.any(np.diff(e) <= 0):
            raise ValueError("cell edges must be strictly ascending")
        if not self.area > 0:
            raise ValueError("cross-section area must be positive")
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)
        for name, value in (("centers", 0.5 * (e[1:] + e[:-1])), ("widths", np.diff(e))):
            value.setflags(write=False)
            object.__setattr__(self, name, value)
        gaps = np.diff(self.centers)
        gaps.setflags(write=False)
        object.__setattr__(self, "center_gaps", gaps)

    @classmethod
    def uniform(cls, z0: float, zf: float, M: int, area: float = 1.0) -> "FvGrid":
        return cls(np.linspace(z0, zf, M + 1), area)

    @property
    def M(self) -> int:
        return self.widths.size

    @property
    def n_dofs(self) -> int:
        return self.M

    @property
    def z0(self) -> float:
        return float(self.edges[0])

    @property
    def zf(self) -> float:
        return float(self.edges[-1])

    def concentrations(self, masses) -> np.ndarray:
        return np.asarray(masses) / (self.area * self.widths)

    def masses_from_concentration(self, c) -> np.ndarray:
        return np.broadcast_to(np.asarray(c, dtype=float), self.widths.shape) * self.area * self.widths

    # interface shared with the spectral discretization
    def rhs(self, dofs, inlet_flow, v, dc, decay) -> np.ndarray:
        return kernels.fv_rhs(dofs, inlet_flow, self.area, self.widths, self.center_gaps, v, dc, decay)

    @property
    def mass_weights(self) -> np.ndarray:
        return np.ones(self.M)

    def partial_mass_weights(self, z_d: float) -> np.ndarray:
        return fv_partial_weights(self, z_d)

    def outlet_flow(self, dofs, v: float):
        """Mass flow leaving the last cell (advection only), mg/min."""
        dofs = np.asarray(dofs)
        return v * dofs[..., -1] / self.widths[-1]

    def concentration_view(self, dofs):
        return self.concentrations(dofs)

    def uniform_dofs(self, c: float) -> np.ndarray:
        return np.array(self.masses_from_concentration(c))


def fv_semidiscretize(grid: FvGrid, spec: PfrFluxSpec, inlet_flow: float,
                      source: np.ndarray | Callable[[np.ndarray], np.ndarray] | float = 0.0,
                      masses=None) -> np.ndarray:
    """Time derivative of the cell masses.

    ``source`` is the volumetric source ``Q`` per cell (concentration per
    minute), given as an array, a scalar or a function of the cell
    concentrations.
    """
    if masses is None:
        masses = np.zeros(grid.M)
    masses = np.ascontiguousarray(masses, dtype=float)
    dm = grid.rhs(masses, float(inlet_flow), spec.v, spec.D_c, 0.0)
    q = source(grid.concentrations(masses)) if callable(source) else source
    return dm + grid.area * grid.widths * np.asarray(q, dtype=float)


def fv_partial_weights(grid: FvGrid, z_d: float) -> np.ndarray:
    """Weights ``a`` with ``a @ masses`` = glucose mass between ``z_0`` and ``z_d``."""
    if not grid.z0 <= z_d <= grid.zf:
        raise ValueError(f"z_d = {z_d} lies outside [{grid.z0}, {grid.zf}]")
    a = np.zeros(grid.M)
    if z_d == grid.zf:
        a[:] = 1.0
        return a
    K = int(np.searchsorted(grid.edges, z_d, side="right")) - 1
    a[:K] = 1.0
    a[K] = (z_d - grid.edges[K]) / (grid.edges[K + 1] - grid.edges[K])
    return a


def fv_partial_integral(grid: FvGrid, masses, z_d: float) -> float:
    """Mass in ``[z_0, z_d]``, taking the cell that contains ``z_d`` as evenly filled."""
    return float(fv_partial_weights(grid, z_d) @ np.asarray(masses, dtype=float))
