"""Time delays ``y(t) = u(t - tau_d)`` and their finite-dimensional approximations.

The delay is split into ``M`` stages of ``tau_d / M`` and each stage is
replaced by a first-order lag, a (1,1) Padé section or one upwind cell of a
transport pipe. The algebraic variant multiplies the input by a logistic
gain instead of delaying it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import expm

from ._util import logistic
from .engine import LinearRealization

__all__ = [
    "DelaySpec",
    "DelayRealization",
    "LogisticGain",
    "exact_delay",
    "lag_chain",
    "pade_chain",
    "transport_chain",
    "algebraic_delay",
    "algebraic_lag",
    "series",
    "step_response",
    "step_l2_error",
    "response",
    "cosine_exosystem",
    "smooth_l2_error",
    "KINDS",
]

LAG = "lag-chain"
PADE = "pade"
TRANSPORT = "transport"
ALGEBRAIC = "algebraic"
KINDS = (LAG, PADE, TRANSPORT, ALGEBRAIC)


@dataclass(frozen=True)
class DelaySpec:
    tau_d: float
    M: int = 1

    def __post_init__(self):
        if not self.tau_d > 0:
            raise ValueError("tau_d must be positive")
        if int(self.M) != self.M or self.M < 1:
            raise ValueError("the number of stages M must be an integer >= 1")


@dataclass(frozen=True)
class LogisticGain:
    """Time-varying gain ``tau(t)`` of the algebraic delay."""

    sigma: float
    t_50: float

    def __call__(self, t):
        return algebraic_lag(t, self.sigma, self.t_50)


@dataclass(frozen=True)
class DelayRealization:
    kind: str
    spec: DelaySpec
    system: LinearRealization | None = None
    gain: Callable | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown delay kind {self.kind!r}")
        if self.kind == ALGEBRAIC:
            if self.gain is None:
                raise ValueError("algebraic delay needs a gain function")
        elif self.system is None or self.system.n_states != self.spec.M:
            raise ValueError(f"{self.kind} realization must have M = {self.spec.M} states")


def exact_delay(u: Callable, spec: DelaySpec, history_start: float | None = None) -> Callable:
    """Return ``y`` with ``y(t) = u(t - tau_d)``.

    If ``u`` is only known from ``history_start`` on, queries that reach
    further back raise ``ValueError``.
    """
    tau = spec.tau_d

    def y(t):
        s = np.asarray(t, dtype=float) - tau
        if history_start is not None and np.any(s < history_start):
            raise ValueError(f"u is unknown before t = {history_start}; queried at {np.min(s)}")
        return u(s)

    return y


def series(first: LinearRealization, second: LinearRealization) -> LinearRealization:
    """Series connection: the output of ``first`` drives ``second``."""
    n1, n2 = first.n_states, second.n_states
    A = np.zeros((n1 + n2, n1 + n2))
    A[:n1, :n1] = first.A
    A[n1:, :n1] = second.B @ first.C
    A[n1:, n1:] = second.A
    B = np.vstack([first.B, second.B @ first.D])
    C = np.hstack([second.D @ first.C, second.C])
    D = second.D @ first.D
    return LinearRealization(A, B, C, D)


def _cascade(stage: LinearRealization, M: int) -> LinearRealization:
    system = stage
    for _ in range(M - 1):
        system = series(system, stage)
    return system


def lag_chain(spec: DelaySpec) -> DelayRealization:
    """``M`` unit-gain first-order lags with time constant ``tau_d / M`` each."""
    k = spec.M / spec.tau_d
    stage = LinearRealization([[-k]], [[k]], [[1.0]])
    return DelayRealization(LAG, spec, _cascade(stage, spec.M))


def pade_chain(spec: DelaySpec) -> DelayRealization:
    """``M`` cascaded (1,1) Padé sections ``(1 - a s) / (1 + a s)`` with ``a = tau_d / (2M)``."""
    a = spec.tau_d / (2 * spec.M)
    # (1 - a s)/(1 + a s) = -1 + 2/(1 + a s)
    stage = LinearRealization([[-1 / a]], [[1 / a]], [[2.0]], [[-1.0]])
    return DelayRealization(PADE, spec, _cascade(stage, spec.M))


def transport_chain(spec: DelaySpec) -> DelayRealization:
    """First-order upwind discretization of ``c_t = -v c_z`` on a unit pipe.

    With ``M`` cells of width ``h = 1 / M`` and velocity ``v = 1 / tau_d`` the
    cell equations ``c_i' = (v / h)(c_{i-1} - c_i)`` coincide with the lag
    chain: a lag chain is an upwind-discretized pipe.
    """
    h = 1.0 / spec.M
    v = 1.0 / spec.tau_d
    rate = v / h
    A = rate * (np.eye(spec.M, k=-1) - np.eye(spec.M))
    B = np.zeros((spec.M, 1))
    B[0, 0] = rate
    C = np.zeros((1, spec.M))
    C[0, -1] = 1.0
    return DelayRealization(TRANSPORT, spec, LinearRealization(A, B, C))


def algebraic_lag(t, sigma: float, t_50: float):
    """Logistic lag coefficient ``1 / (1 + exp(-sigma (t - t_50)))``."""
    if np.ndim(t) == 0:
        return logistic(sigma * (float(t) - t_50))
    t = np.asarray(t, dtype=float)
    return np.array([logistic(sigma * (ti - t_50)) for ti in t.ravel()]).reshape(t.shape)


def algebraic_delay(spec: DelaySpec, sigma: float | None = None) -> DelayRealization:
    """Gain ``tau(t)`` centred on ``tau_d``; default steepness ``4 M / tau_d``."""
    sigma = 4.0 * spec.M / spec.tau_d if sigma is None else sigma
    return DelayRealization(ALGEBRAIC, spec, gain=LogisticGain(sigma, spec.tau_d))


def _propagate(A, g, t, x0=None) -> np.ndarray:
    """States of ``x' = A x + g`` (``g`` constant) at ascending times ``t >= 0``."""
    n = A.shape[0]
    aug = np.zeros((n + 1, n + 1))
    aug[:n, :n] = A
    aug[:n, n] = g
    x = np.zeros(n) if x0 is None else np.asarray(x0, dtype=float).copy()
    out = np.empty((t.size, n))
    cache: dict[float, np.ndarray] = {}
    t_prev = 0.0
    for i, ti in enumerate(t):
        dt = ti - t_prev
        if dt > 0:
            key = round(dt, 12)
            phi = cache.get(key)
            if phi is None:
                phi = cache[key] = expm(aug * dt)
            x = phi[:n, :n] @ x + phi[:n, n]
        out[i] = x
        t_prev = ti
    return out


def step_response(real: DelayRealization, t) -> np.ndarray:
    """Response to a unit step at ``t = 0`` from the zero state (``t = 0`` means ``0+``)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if real.kind == ALGEBRAIC:
        return np.where(t >= 0, real.gain(t), 0.0)
    sys = real.system
    order = np.argsort(t, kind="stable")
    ts = t[order]
    pos = ts >= 0
    y = np.zeros(t.size)
    if np.any(pos):
        x = _propagate(sys.A, sys.B[:, 0], ts[pos])
        y[pos] = x @ sys.C[0] + sys.D[0, 0]
    out = np.empty(t.size)
    out[order] = y
    return out


def step_l2_error(real: DelayRealization, horizon: float | None = None, n: int = 4001) -> float:
    """L2 distance over ``[0, horizon]`` between the step response and the delayed step.

    The default horizon is ``5 tau_d``. The grid contains ``tau_d`` twice so
    the trapezoidal rule sees the jump of the exact response as a jump.
    """
    tau = real.spec.tau_d
    horizon = 5.0 * tau if horizon is None else horizon
    t = np.linspace(0.0, horizon, n)
    t = np.sort(np.concatenate([t[np.abs(t - tau) > 1e-12], [tau, tau]]))
    exact = (t >= tau).astype(float)
    exact[np.searchsorted(t, tau)] = 0.0  # left limit at the jump
    err = step_response(real, t) - exact
    return float(np.sqrt(trapezoid(err * err, t)))


def cosine_exosystem(omega: float) -> LinearRealization:
    """Autonomous generator of ``u(t) = 1 - cos(omega t)``.

    State ``(1, cos, sin)``; the initial state is stored in ``B``.
    """
    A = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -omega], [0.0, omega, 0.0]])
    w0 = np.array([[1.0], [1.0], [0.0]])
    return LinearRealization(A, w0, [[1.0, -1.0, 0.0]])


def response(real: DelayRealization, u_system: LinearRealization, t) -> np.ndarray:
    """Response to an input produced by an autonomous exosystem.

    ``u_system.B[:, 0]`` is the exosystem's initial state and the driving
    signal is ``u(t) = C w(t)``. The cascade is propagated exactly with the
    matrix exponential; ``t`` must be ascending and non-negative.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if t[0] < 0 or np.any(np.diff(t) < 0):
        raise ValueError("times must be ascending and non-negative")
    w0 = u_system.B[:, 0]
    Aw, cw = u_system.A, u_system.C[0]
    m = Aw.shape[0]
    if real.kind == ALGEBRAIC:
        w = _propagate(Aw, np.zeros(m), t, w0)
        return real.gain(t) * (w @ cw)
    sys = real.system
    n = sys.n_states
    big = np.zeros((n + m, n + m))
    big[:m, :m] = Aw
    big[m:, :m] = np.outer(sys.B[:, 0], cw)
    big[m:, m:] = sys.A
    z0 = np.concatenate([w0, np.zeros(n)])
    z = _propagate(big, np.zeros(n + m), t, z0)
    return z[:, m:] @ sys.C[0] + sys.D[0, 0] * (z[:, :m] @ cw)


def smooth_l2_error(real: DelayRealization, omega: float | None = None, n: int = 4001) -> float:
    """L2 error over ``[0, 5 tau_d]`` for ``u = 1 - cos(omega t)`` (default ``omega = 1 / tau_d``)."""
    tau = real.spec.tau_d
    omega = 1.0 / tau if omega is None else omega
    t = np.linspace(0.0, 5.0 * tau, n)
    exact = np.where(t >= tau, 1.0 - np.cos(omega * (t - tau)), 0.0)
    err = response(real, cosine_exosystem(omega), t) - exact
    return float(np.sqrt(trapezoid(err * err, t)))
