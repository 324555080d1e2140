"""Spectral Galerkin discretization of the 1-D plug-flow reactor."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import kernels
from ..kinetics import PfrFluxSpec
from .lagrange import interpolation_matrix, lagrange_basis
from .quadrature import GAUSS_LOBATTO, _check_rule, chebyshev_nodes_weights, gauss_legendre_on, \
    legendre_nodes_weights

__all__ = ["SpectralBasis", "DomainMap", "SpectralDiscretization", "spectral_basis",
           "sg_semidiscretize", "sg_integral"]

LEGENDRE = "legendre"
CHEBYSHEV = "chebyshev"
SUBINTERVAL_NODES = 16


def _frozen(a) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SpectralBasis:
    family: str
    rule: str
    M: int
    nodes: np.ndarray
    weights: np.ndarray
    bary_weights: np.ndarray
    D1: np.ndarray
    D2: np.ndarray
    ell_left: np.ndarray  # l_n(-1)
    ell_right: np.ndarray  # l_n(+1)

    def interpolate(self, values, x) -> np.ndarray:
        return interpolation_matrix(self.nodes, self.bary_weights, x) @ np.asarray(values)


def spectral_basis(M: int, family: str = LEGENDRE, rule: str = GAUSS_LOBATTO) -> SpectralBasis:
    """Nodal basis of degree ``M`` on ``[-1, 1]`` (nodes sorted ascending)."""
    family = family.lower()
    if family == LEGENDRE:
        z, w = legendre_nodes_weights(M, rule)
    elif family == CHEBYSHEV:
        z, w = chebyshev_nodes_weights(M, rule)
    else:
        raise ValueError(f"unknown polynomial family {family!r}")
    order = np.argsort(z)
    z, w = z[order], w[order]
    bw, D1, D2 = lagrange_basis(z)
    ends = interpolation_matrix(z, bw, [-1.0, 1.0])
    rule = _check_rule(rule)
    return SpectralBasis(family, rule, M, *map(_frozen, (z, w, bw, D1, D2, ends[0], ends[1])))


@dataclass(frozen=True)
class DomainMap:
    """Affine map between ``xi`` in [-1, 1] and ``z`` in [z0, zf]."""

    z0: float
    zf: float

    def __post_init__(self):
        if not self.zf > self.z0:
            raise ValueError("need zf > z0")

    @property
    def jacobian(self) -> float:
        return 0.5 * (self.zf - self.z0)

    def to_z(self, xi):
        return 0.5 * (np.asarray(xi) + 1.0) * (self.zf - self.z0) + self.z0

    def to_xi(self, z):
        return 2.0 * (np.asarray(z) - self.z0) / (self.zf - self.z0) - 1.0

    def velocity(self, v: float) -> float:
        return v / self.jacobian

    def diffusion(self, D_c: float) -> float:
        return D_c / self.jacobian ** 2


def _require_unit_weight(basis: SpectralBasis):
    if basis.family != LEGENDRE:
        raise ValueError("the Galerkin scheme integrates with weight 1; use a Legendre basis")


def sg_semidiscretize(basis: SpectralBasis, domain: DomainMap, spec: PfrFluxSpec,
                      inlet_flow: float,
                      source: np.ndarray | Callable[[np.ndarray], np.ndarray] | float = 0.0,
                      coeffs=None, area: float = 1.0) -> np.ndarray:
    """Time derivative of the nodal concentrations.

    The inflow boundary carries the prescribed flux ``F / (area * dz/dxi)``
    in transformed units; the outflow boundary carries ``vbar * c(+1)``.
    """
    _require_unit_weight(basis)
    c = np.zeros(basis.M + 1) if coeffs is None else np.ascontiguousarray(coeffs, dtype=float)
    jac = domain.jacobian
    dc = kernels.sg_rhs(c, inlet_flow / (area * jac), domain.velocity(spec.v),
                        domain.diffusion(spec.D_c), basis.D1, basis.weights,
                        basis.ell_left, basis.ell_right, 0.0)
    q = source(c) if callable(source) else source
    return dc + np.asarray(q, dtype=float)


def sg_integral_weights(basis: SpectralBasis, domain: DomainMap, sub_interval=None,
                        area: float = 1.0) -> np.ndarray:
    """Weights ``a`` with ``a @ coeffs`` = ``area * int c dz`` over the (sub-)interval in xi."""
    _require_unit_weight(basis)
    if sub_interval is None:
        return area * domain.jacobian * np.asarray(basis.weights)
    a, b = map(float, sub_interval)
    if not -1.0 <= a < b <= 1.0:
        raise ValueError(f"sub-interval {sub_interval} must be a non-empty part of [-1, 1]")
    x, w = gauss_legendre_on(a, b, SUBINTERVAL_NODES)
    E = interpolation_matrix(basis.nodes, basis.bary_weights, x)
    return area * domain.jacobian * (w @ E)


def sg_integral(basis: SpectralBasis, domain: DomainMap, coeffs, sub_interval=None,
                area: float = 1.0) -> float:
    """Mass ``area * int c dz`` from the nodal coefficients."""
    return float(sg_integral_weights(basis, domain, sub_interval, area) @ np.asarray(coeffs))


class SpectralDiscretization:
    """Basis, domain map and cross-section bundled for the reactor model."""

    def __init__(self, basis: SpectralBasis, domain: DomainMap, area: float = 1.0):
        _require_unit_weight(basis)
        self.basis = basis
        self.domain = domain
        self.area = area
        self._mass_weights = _frozen(sg_integral_weights(basis, domain, None, area))

    @classmethod
    def legendre_lobatto(cls, z0: float, zf: float, M: int, area: float = 1.0):
        return cls(spectral_basis(M), DomainMap(z0, zf), area)

    @property
    def n_dofs(self) -> int:
        return self.basis.M + 1

    @property
    def nodes_z(self) -> np.ndarray:
        return self.domain.to_z(self.basis.nodes)

    def rhs(self, dofs, inlet_flow, v, dc, decay) -> np.ndarray:
        d = self.domain
        b = self.basis
        return kernels.sg_rhs(dofs, inlet_flow / (self.area * d.jacobian), d.velocity(v),
                              d.diffusion(dc), b.D1, b.weights, b.ell_left, b.ell_right, decay)

    @property
    def mass_weights(self) -> np.ndarray:
        return self._mass_weights

    def partial_mass_weights(self, z_d: float) -> np.ndarray:
        xi = float(self.domain.to_xi(z_d))
        if xi <= -1.0:
            return np.zeros(self.n_dofs)
        return sg_integral_weights(self.basis, self.domain, (-1.0, min(xi, 1.0)), self.area)

    def outlet_flow(self, dofs, v: float):
        return self.area * v * (np.asarray(dofs) @ self.basis.ell_right)

    def concentration_view(self, dofs):
        return np.asarray(dofs)

    def uniform_dofs(self, c: float) -> np.ndarray:
        return np.full(self.n_dofs, float(c))
