"""Dormand-Prince 5(4) integrator with PI step control and dense output.

The integrator works on a single smooth interval ``[t0, t1]``. Callers that
have input discontinuities split the horizon at the breakpoints and call
:func:`dopri5` once per piece, handing the final state over.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["IntegrationError", "StepSizeUnderflow", "NonFiniteError", "SegmentResult", "dopri5"]


class IntegrationError(RuntimeError):
    """Base class for integrator failures."""


class StepSizeUnderflow(IntegrationError):
    """The step size shrank below the floating-point resolution of t."""


class NonFiniteError(IntegrationError):
    """The right-hand side returned NaN or inf."""


# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# difference between the 5th and the embedded 4th order weights
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# Shampine's 4th order continuous extension, y(t + th) = y + h K^T P [th, th^2, th^3, th^4]
_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
# PI controller exponents (Gustafsson), scaled by 1/(q+1) with q = 4
_ALPHA = 0.7 / 5
_BETA = 0.4 / 5


@dataclass
class SegmentResult:
    t_end: float
    y_end: np.ndarray
    sample_times: np.ndarray
    samples: np.ndarray
    n_steps: int
    n_rejected: int
    n_evals: int
    last_step: float


def _checked(f: np.ndarray, t: float) -> np.ndarray:
    if not np.all(np.isfinite(f)):
        raise NonFiniteError(f"non-finite right-hand side at t = {t!r}")
    return f


def _initial_step(fun, t0, y0, f0, direction_end, rtol, atol, max_step):
    scale = atol + np.abs(y0) * rtol
    d0 = math.sqrt(np.mean((y0 / scale) ** 2))
    d1 = math.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, max_step, direction_end - t0)
    y1 = y0 + h0 * f0
    f1 = _checked(np.asarray(fun(t0 + h0, y1), dtype=float), t0 + h0)
    d2 = math.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, max_step, direction_end - t0)


def dopri5(
    fun: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0: np.ndarray,
    t1: float,
    *,
    rtol: float = 1e-8,
    atol: float | np.ndarray = 1e-10,
    max_step: float = np.inf,
    t_eval: np.ndarray | None = None,
    first_step: float | None = None,
) -> SegmentResult:
    """Integrate ``y' = fun(t, y)`` from ``t0`` to ``t1`` (``t1 > t0``).

    Samples requested in ``t_eval`` (ascending, inside ``[t0, t1]``) are
    produced by the dense-output polynomial, so they never influence step
    selection. The returned ``last_step`` is a good ``first_step`` for a
    continuation segment.
    """
    if not t1 > t0:
        raise ValueError(f"empty integration interval [{t0}, {t1}]")
    y = np.array(y0, dtype=float)
    n = y.size
    t_eval = np.empty(0) if t_eval is None else np.asarray(t_eval, dtype=float)
    samples = np.empty((t_eval.size, n))
    k_eval = 0
    while k_eval < t_eval.size and t_eval[k_eval] <= t0:
        samples[k_eval] = y
        k_eval += 1

    t = float(t0)
    f = _checked(np.asarray(fun(t, y), dtype=float), t)
    n_evals = 1
    if first_step is None:
        h = _initial_step(fun, t, y, f, t1, rtol, atol, max_step)
        n_evals += 1
    else:
        h = min(first_step, max_step, t1 - t)

    K = np.empty((7, n))
    err_prev = 1e-4
    n_steps = n_rejected = 0
    last_accepted = h
    while t < t1:
        min_step = 10 * np.spacing(abs(t) + abs(t1))
        if h < min_step:
            raise StepSizeUnderflow(f"step size {h:.3e} underflow at t = {t!r}")
        h_nominal = h
        final = t + h >= t1 - min_step
        if final:
            h = t1 - t
        K[0] = f
        for s in range(1, 6):
            ys = y + h * (_A[s] @ K[:s])
            K[s] = _checked(np.asarray(fun(t + _C[s] * h, ys), dtype=float), t + _C[s] * h)
        y_new = y + h * (_B[:6] @ K[:6])
        t_new = t1 if final else t + h
        f_new = _checked(np.asarray(fun(t_new, y_new), dtype=float), t_new)
        K[6] = f_new
        n_evals += 6

        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = math.sqrt(np.mean((h * (_E @ K) / scale) ** 2))
        if err <= 1.0:
            err = max(err, 1e-10)
            factor = _SAFETY * err ** -_ALPHA * err_prev ** _BETA
            factor = min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            # dense output on (t, t_new]
            if k_eval < t_eval.size and t_eval[k_eval] <= t_new:
                Q = K.T @ _P
                while k_eval < t_eval.size and t_eval[k_eval] <= t_new:
                    theta = (t_eval[k_eval] - t) / h
                    samples[k_eval] = y + h * (Q @ (theta ** np.arange(1, 5)))
                    k_eval += 1
            last_accepted = h_nominal
            t, y, f = t_new, y_new, f_new
            err_prev = err
            n_steps += 1
            h = min(h * factor, max_step)
        else:
            n_rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err ** -(1 / 5))

    while k_eval < t_eval.size:  # samples exactly at t1 after float round-off
        samples[k_eval] = y
        k_eval += 1
    return SegmentResult(t, y, t_eval, samples, n_steps, n_rejected, n_evals, last_accepted)
