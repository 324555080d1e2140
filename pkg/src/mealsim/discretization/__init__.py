"""Spatial discretizations of the plug-flow reactor: finite volume and spectral Galerkin."""
from .fv import FvGrid, fv_partial_integral, fv_partial_weights, fv_semidiscretize
from .lagrange import barycentric_weights, interpolation_matrix, lagrange_basis
from .quadrature import (GAUSS, GAUSS_LOBATTO, chebyshev_nodes_weights, gauss_legendre_on,
                         legendre, legendre_nodes_weights)
from .spectral import (DomainMap, SpectralBasis, SpectralDiscretization, sg_integral,
                       sg_integral_weights, sg_semidiscretize, spectral_basis)

__all__ = [
    "FvGrid", "fv_partial_integral", "fv_partial_weights", "fv_semidiscretize",
    "barycentric_weights", "interpolation_matrix", "lagrange_basis",
    "GAUSS", "GAUSS_LOBATTO", "chebyshev_nodes_weights", "gauss_legendre_on", "legendre",
    "legendre_nodes_weights",
    "DomainMap", "SpectralBasis", "SpectralDiscretization", "sg_integral", "sg_integral_weights",
    "sg_semidiscretize", "spectral_basis",
]
