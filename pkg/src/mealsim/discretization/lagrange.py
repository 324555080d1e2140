"""Barycentric Lagrange interpolation and collocation differentiation matrices."""
from __future__ import annotations

import numpy as np

__all__ = ["barycentric_weights", "lagrange_basis", "interpolation_matrix"]


def barycentric_weights(nodes) -> np.ndarray:
    """``w_m = prod_{l != m} 1 / (z_m - z_l)``."""
    z = np.asarray(nodes, dtype=float)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(diff == 0.0):
        raise ValueError("interpolation nodes must be distinct")
    return 1.0 / np.prod(diff, axis=1)


def lagrange_basis(nodes) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Barycentric weights and the first/second differentiation matrices.

    ``D1[l, m]`` is ``l_m'(z_l)``, so ``D1 @ f(z)`` differentiates the
    interpolant of ``f``. Diagonals are the negative off-diagonal row sums.
    """
    z = np.asarray(nodes, dtype=float)
    w = barycentric_weights(z)
    n = z.size
    dz = z[:, None] - z[None, :]
    np.fill_diagonal(dz, 1.0)
    inv_dz = 1.0 / dz
    np.fill_diagonal(inv_dz, 0.0)

    D1 = (w[None, :] / w[:, None]) * inv_dz
    np.fill_diagonal(D1, 0.0)
    np.fill_diagonal(D1, -D1.sum(axis=1))

    # off-diagonal: -2 l_m'(z_l) (-l_l'(z_l) + 1 / (z_l - z_m))
    D2 = -2.0 * D1 * (-np.diag(D1)[:, None] + inv_dz)
    np.fill_diagonal(D2, 0.0)
    np.fill_diagonal(D2, -D2.sum(axis=1))
    if n == 1:
        D1 = np.zeros((1, 1))
        D2 = np.zeros((1, 1))
    return w, D1, D2


def interpolation_matrix(nodes, weights, x) -> np.ndarray:
    """Matrix ``E`` with ``E @ f(nodes)`` = barycentric interpolant at points ``x``."""
    z = np.asarray(nodes, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    diff = x[:, None] - z[None, :]
    exact = diff == 0.0
    diff[exact] = 1.0
    terms = weights[None, :] / diff
    E = terms / terms.sum(axis=1, keepdims=True)
    rows = np.any(exact, axis=1)
    E[rows] = exact[rows].astype(float)
    return E
