# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled semidiscretization kernels; see ``_kernels_py`` for the reference."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def fv_rhs(const double[::1] masses, double inlet_flow, double area,
           const double[::1] widths, const double[::1] center_gaps,
           double v, double dc, double decay):
    cdef Py_ssize_t M = masses.shape[0]
    cdef Py_ssize_t i
    cdef double c_prev, c_cur, flux_left, flux_right
    out_arr = np.empty(M, dtype=np.float64)
    cdef double[::1] out = out_arr
    flux_left = inlet_flow / area
    c_prev = masses[0] / (area * widths[0])
    for i in range(M):
        if i + 1 < M:
            c_cur = masses[i + 1] / (area * widths[i + 1])
            flux_right = v * c_prev - dc * (c_cur - c_prev) / center_gaps[i]
        else:
            flux_right = v * c_prev
        out[i] = -area * (flux_right - flux_left) - decay * masses[i]
        flux_left = flux_right
        if i + 1 < M:
            c_prev = c_cur
    return out_arr


def sg_rhs(const double[::1] coeffs, double inlet_flux, double vbar, double dbar,
           const double[:, ::1] d1, const double[::1] weights,
           const double[::1] ell_left, const double[::1] ell_right, double decay):
    cdef Py_ssize_t n = coeffs.shape[0]
    cdef Py_ssize_t l, m
    cdef double acc, outlet = 0.0
    wflux_arr = np.empty(n, dtype=np.float64)
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] wflux = wflux_arr
    cdef double[::1] out = out_arr
    for l in range(n):
        acc = 0.0
        for m in range(n):
            acc += d1[l, m] * coeffs[m]
        wflux[l] = (vbar * coeffs[l] - dbar * acc) * weights[l]
        outlet += ell_right[l] * coeffs[l]
    outlet *= vbar
    for m in range(n):
        out[m] = 0.0
    for l in range(n):
        acc = wflux[l]
        for m in range(n):
            out[m] += d1[l, m] * acc
    for m in range(n):
        out[m] = (out[m] + inlet_flux * ell_left[m] - outlet * ell_right[m]) / weights[m] \
            - decay * coeffs[m]
    return out_arr
