"""Legendre and Chebyshev Gauss / Gauss-Lobatto rules on [-1, 1].

``M`` follows the convention of nodes ``z_0 .. z_M``, so every rule has
``M + 1`` nodes. Gauss rules are exact up to degree ``2M + 1`` and
Gauss-Lobatto rules up to ``2M - 1``.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "GAUSS",
    "GAUSS_LOBATTO",
    "legendre",
    "legendre_nodes_weights",
    "chebyshev_nodes_weights",
    "gauss_legendre_on",
]

GAUSS = "gauss"
GAUSS_LOBATTO = "gauss-lobatto"

_NEWTON_TOL = 1e-14
_NEWTON_MAXIT = 100


def _check_rule(rule: str) -> str:
    rule = rule.lower().replace("_", "-")
    if rule not in (GAUSS, GAUSS_LOBATTO):
        raise ValueError(f"unknown quadrature rule {rule!r}")
    return rule


def legendre(k: int, z):
    """Values ``L_k(z)``, ``L_k'(z)`` via the three-term recurrence.

    The derivative uses ``L'_{j+1} = L'_{j-1} + (2j + 1) L_j``, which stays
    finite at the end points.
    """
    z = np.asarray(z, dtype=float)
    p_prev, p = np.ones_like(z), z.copy()
    dp_prev, dp = np.zeros_like(z), np.ones_like(z)
    if k == 0:
        return p_prev, dp_prev
    for j in range(1, k):
        p_next = ((2 * j + 1) * z * p - j * p_prev) / (j + 1)
        dp_next = dp_prev + (2 * j + 1) * p
        p_prev, p = p, p_next
        dp_prev, dp = dp, dp_next
    return p, dp


def _newton(fun, z0):
    z = z0.copy()
    for _ in range(_NEWTON_MAXIT):
        f, df = fun(z)
        dz = f / df
        z -= dz
        if np.max(np.abs(dz)) < _NEWTON_TOL:
            return z
    raise RuntimeError("Newton iteration for quadrature nodes did not converge")


def legendre_nodes_weights(M: int, rule: str = GAUSS_LOBATTO) -> tuple[np.ndarray, np.ndarray]:
    """Legendre nodes and weights (ascending) for the given rule."""
    if M < 1:
        raise ValueError("M must be >= 1")
    rule = _check_rule(rule)
    if rule == GAUSS:
        n = M + 1
        guess = -np.cos((2 * np.arange(n) + 1) * np.pi / (2 * n))
        z = _newton(lambda x: legendre(n, x), guess)
        _, dp = legendre(n, z)
        w = 2.0 / ((1.0 - z * z) * dp * dp)
        return z, w

    # interior nodes are the zeros of L_M'
    def dl(x):
        p, dp = legendre(M, x)
        d2p = (2 * x * dp - M * (M + 1) * p) / (1 - x * x)
        return dp, d2p

    interior = np.empty(0)
    if M >= 2:
        interior = _newton(dl, -np.cos(np.pi * np.arange(1, M) / M))
    z = np.concatenate([[-1.0], interior, [1.0]])
    p, _ = legendre(M, z)
    w = 2.0 / (M * (M + 1)) / (p * p)
    return z, w


def chebyshev_nodes_weights(M: int, rule: str = GAUSS_LOBATTO) -> tuple[np.ndarray, np.ndarray]:
    """Chebyshev nodes in the closed-form order ``l = 0..M`` (descending), with weights.

    The weights integrate against ``1/sqrt(1 - z^2)``. The upper half is
    evaluated as ``cos(theta)`` for ``theta <= pi/4`` and ``sin(pi/2 - theta)``
    beyond, both well conditioned there, and mirrored, so the set is exactly
    symmetric with an exact zero in the middle when one exists.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    rule = _check_rule(rule)
    l = np.arange(M + 1)
    if rule == GAUSS:
        num, den = 2 * l + 1, 2 * M + 2  # theta = pi * num / den
        w = np.full(M + 1, np.pi / (M + 1))
    else:
        num, den = 2 * l, 2 * M
        w = np.full(M + 1, np.pi / M)
        w[0] = w[-1] = np.pi / (2 * M)
    z = np.where(4 * num <= den, np.cos(np.pi * num / den), np.sin(np.pi * (den - 2 * num) / (2 * den)))
    half = (M + 1) // 2
    z[M + 1 - half:] = -z[:half][::-1]
    if M % 2 == 0:
        z[M // 2] = 0.0
    return z, w


def gauss_legendre_on(a: float, b: float, n: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """``n``-point Gauss-Legendre rule mapped to ``[a, b]``."""
    if not b > a:
        raise ValueError(f"empty interval [{a}, {b}]")
    z, w = legendre_nodes_weights(n - 1, GAUSS)
    half = 0.5 * (b - a)
    return a + half * (z + 1.0), half * w

