"""Numpy implementations of the semidiscretization kernels.

Reference versions of the compiled kernels in ``_kernels.pyx``; the two
must agree to round-off.
"""
import numpy as np


def fv_rhs(masses, inlet_flow, area, widths, center_gaps, v, dc, decay):
    """Cell-mass derivatives of the upwind finite-volume scheme.

    Inlet flux ``inlet_flow / area``, upwind advection with central
    diffusion on interior faces, advection-only outlet, and a first-order
    sink ``-decay * c`` in every cell.
    """
    m = np.asarray(masses, dtype=float)
    c = m / (area * widths)
    flux = np.empty(m.size + 1)
    flux[0] = inlet_flow / area
    flux[1:-1] = v * c[:-1] - dc * (c[1:] - c[:-1]) / center_gaps
    flux[-1] = v * c[-1]
    return -area * np.diff(flux) - decay * m


def sg_rhs(coeffs, inlet_flux, vbar, dbar, d1, weights, ell_left, ell_right, decay):
    """Nodal-coefficient derivatives of the spectral Galerkin scheme on [-1, 1]."""
    c = np.asarray(coeffs, dtype=float)
    flux = vbar * c - dbar * (d1 @ c)
    volume = (d1.T @ (flux * weights)) / weights
    outlet = vbar * (ell_right @ c)
    return volume + (inlet_flux * ell_left - outlet * ell_right) / weights - decay * c
