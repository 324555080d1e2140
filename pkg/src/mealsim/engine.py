"""Meal schedules, model interface and the simulation engine.

Two meal-input semantics are supported. A meal with ``duration > 0`` is a
step input: its carbohydrate mass is delivered at the constant rate
``carbs / duration`` over ``[time, time + duration)``. A meal with
``duration == 0`` is an impulse: the state jumps by ``f_d(x) * carbs`` and
the autonomous dynamics take over.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .integrator import dopri5

__all__ = [
    "MealEvent",
    "MealSchedule",
    "IntegratorOptions",
    "MealContext",
    "ImpulseRecord",
    "Trajectory",
    "LinearRealization",
    "ModelInstance",
    "LinearModel",
    "PiecewiseConstant",
    "integrate",
    "simulate",
    "simulate_step_meals",
    "simulate_impulse_meals",
    "linear_step",
    "steady_state",
]


@dataclass(frozen=True)
class MealEvent:
    """One meal. ``carbs`` in mg, ``time`` and ``duration`` in minutes."""

    time: float
    carbs: float
    duration: float = 0.0

    def __post_init__(self):
        if not (self.time >= 0 and math.isfinite(self.time)):
            raise ValueError(f"meal time must be finite and >= 0, got {self.time}")
        if not (self.carbs >= 0 and math.isfinite(self.carbs)):
            raise ValueError(f"meal carbs must be finite and >= 0, got {self.carbs}")
        if not (self.duration >= 0 and math.isfinite(self.duration)):
            raise ValueError(f"meal duration must be finite and >= 0, got {self.duration}")

    @property
    def is_impulse(self) -> bool:
        return self.duration == 0.0

    @property
    def rate(self) -> float:
        return self.carbs / self.duration


@dataclass(frozen=True)
class MealSchedule:
    events: tuple[MealEvent, ...] = ()

    def __post_init__(self):
        events = tuple(self.events)
        object.__setattr__(self, "events", events)
        for a, b in zip(events, events[1:]):
            if not b.time > a.time:
                raise ValueError("meal times must be strictly increasing")
            if a.time + a.duration > b.time:
                raise ValueError(
                    f"step meal at t={a.time} (duration {a.duration}) overlaps the meal at t={b.time}"
                )

    @classmethod
    def single(cls, carbs: float, time: float = 0.0, duration: float = 0.0) -> "MealSchedule":
        return cls((MealEvent(time, carbs, duration),))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    @property
    def total_carbs(self) -> float:
        return sum(e.carbs for e in self.events)

    def scaled(self, factor: float) -> "MealSchedule":
        """Same event times and durations, carbohydrate masses times ``factor``."""
        return MealSchedule(tuple(replace(e, carbs=e.carbs * factor) for e in self.events))


@dataclass(frozen=True)
class IntegratorOptions:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step: float = 5.0
    output_interval: float = 1.0

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_step", "output_interval"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


@dataclass(frozen=True)
class MealContext:
    """Meal information some models need inside their right-hand side.

    ``t_meal`` is the start of the most recent meal (or the simulation start)
    and ``carbs`` the carbohydrate mass that governs the current meal.
    """

    t_meal: float = 0.0
    carbs: float = 0.0


@dataclass(frozen=True)
class ImpulseRecord:
    time: float
    carbs: float
    x_minus: np.ndarray
    x_plus: np.ndarray


@dataclass
class Trajectory:
    """Sampled simulation result.

    ``states[i]`` is the state at ``times[i]``; at impulse times this is the
    post-jump state, and the pre-jump state is kept in ``impulses``.
    """

    times: np.ndarray
    states: np.ndarray
    outputs: np.ndarray
    state_labels: tuple[str, ...] = ()
    model: str = ""
    body_weight: float | None = None
    impulses: list[ImpulseRecord] = field(default_factory=list)

    @property
    def per_kg_outputs(self) -> np.ndarray | None:
        if self.body_weight is None:
            return None
        return self.outputs / self.body_weight

    def scaled(self, factor: float) -> "Trajectory":
        return Trajectory(
            self.times.copy(),
            self.states * factor,
            self.outputs * factor,
            self.state_labels,
            self.model,
            self.body_weight,
            [ImpulseRecord(r.time, r.carbs * factor, r.x_minus * factor, r.x_plus * factor)
             for r in self.impulses],
        )

    def at(self, t: float) -> np.ndarray:
        i = int(np.searchsorted(self.times, t))
        if i >= self.times.size or self.times[i] != t:
            raise KeyError(f"t = {t} is not a sample time")
        return self.states[i]


@dataclass(frozen=True)
class LinearRealization:
    """Continuous-time state-space system ``x' = A x + B u``, ``y = C x + D u``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray | None = None
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValueError(f"A must be square, got shape {A.shape}")
        B = np.asarray(self.B, dtype=float).reshape(n, -1)
        C = np.asarray(self.C, dtype=float).reshape(-1, n)
        D = np.zeros((C.shape[0], B.shape[1])) if self.D is None else \
            np.asarray(self.D, dtype=float).reshape(C.shape[0], B.shape[1])
        for name, value in (("A", A), ("B", B), ("C", C), ("D", D)):
            value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def n_states(self) -> int:
        return self.A.shape[0]

    def dc_gain(self) -> np.ndarray:
        return -self.C @ np.linalg.solve(self.A, self.B) + self.D


class ModelInstance:
    """Interface every meal model implements.

    Subclasses provide ``rhs`` (full dynamics with the meal rate ``d`` in
    mg/min), ``output`` (R_A in mg/min, vectorized over rows of states) and,
    when the model is affine in the meal input, ``injection`` (the ``f_d``
    map used for impulses).
    """

    name: str = "model"
    state_labels: tuple[str, ...] = ()
    body_weight: float = 82.0
    linear: LinearRealization | None = None
    linear_in_d: bool = False
    equation_types: str = "ODEs"

    @property
    def n_states(self) -> int:
        return len(self.state_labels)

    def rhs(self, t: float, x: np.ndarray, d: float, ctx: MealContext) -> np.ndarray:
        raise NotImplementedError

    def output(self, x: np.ndarray) -> np.ndarray | float:
        raise NotImplementedError

    def injection(self, x: np.ndarray) -> np.ndarray | None:
        return None

    def begin_meal(self, x: np.ndarray, event: MealEvent, ctx: MealContext) -> MealContext:
        return MealContext(t_meal=event.time, carbs=event.carbs)

    def zero_state(self) -> np.ndarray:
        return np.zeros(self.n_states)


class LinearModel(ModelInstance):
    """A model given entirely by a :class:`LinearRealization` with one input."""

    linear_in_d = True

    def __init__(self, realization: LinearRealization, name: str = "linear",
                 state_labels: Sequence[str] | None = None, body_weight: float = 82.0):
        self.linear = realization
        self.name = name
        n = realization.n_states
        self.state_labels = tuple(state_labels) if state_labels else tuple(f"x{i}" for i in range(n))
        self.body_weight = body_weight
        self._A = realization.A
        self._b = realization.B[:, 0]
        self._c = realization.C[0]

    def rhs(self, t, x, d, ctx):
        return self._A @ x + self._b * d

    def output(self, x):
        return np.asarray(x) @ self._c

    def injection(self, x):
        return self._b


@dataclass(frozen=True)
class PiecewiseConstant:
    """Input that equals ``values[k]`` on ``[breakpoints[k], breakpoints[k+1])``.

    Before the first breakpoint the input is ``initial``.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    initial: float = 0.0

    def __post_init__(self):
        if len(self.breakpoints) != len(self.values):
            raise ValueError("breakpoints and values differ in length")
        if any(b <= a for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")


def _output_grid(t_a: float, t_b: float, interval: float, extra: Sequence[float] = ()) -> np.ndarray:
    n = int(math.floor((t_b - t_a) / interval + 1e-9))
    grid = t_a + interval * np.arange(n + 1)
    grid = np.concatenate([grid, [t_b], np.asarray(extra, dtype=float)])
    grid = grid[(grid >= t_a) & (grid <= t_b)]
    # collapse points closer than 1e-9 min to the nominal grid
    grid = np.unique(np.round(grid, 9))
    return grid


class _Recorder:
    """Collects samples keyed by time; later writes at the same time win."""

    def __init__(self, grid: np.ndarray, n: int):
        self.grid = grid
        self.states = np.full((grid.size, n), np.nan)

    def segment_times(self, a: float, b: float) -> tuple[np.ndarray, slice]:
        lo = int(np.searchsorted(self.grid, a, side="left"))
        hi = int(np.searchsorted(self.grid, b, side="right"))
        return self.grid[lo:hi], slice(lo, hi)

    def write(self, idx: slice, values: np.ndarray):
        self.states[idx] = values

    def write_at(self, t: float, x: np.ndarray):
        i = int(np.searchsorted(self.grid, t))
        if i < self.grid.size and abs(self.grid[i] - t) <= 1e-9:
            self.states[i] = x


def _run_segment(model, x, t_a, t_b, d, ctx, opts, rec, method, first_step):
    times, idx = rec.segment_times(t_a, t_b)
    if method == "expm":
        if model.linear is None:
            raise ValueError(f"model {model.name!r} has no linear realization for method='expm'")
        out = np.empty((times.size, x.size))
        cache: dict[float, tuple[np.ndarray, np.ndarray]] = {}
        t_prev, x_prev = t_a, x
        for i, ti in enumerate(times):
            dt = ti - t_prev
            if dt > 0:
                x_prev = _propagate_linear(model.linear, x_prev, d, dt, cache)
                t_prev = ti
            out[i] = x_prev
        if t_b > t_prev:
            x_prev = _propagate_linear(model.linear, x_prev, d, t_b - t_prev, cache)
        rec.write(idx, out)
        return x_prev, first_step

    def fun(t, y):
        return model.rhs(t, y, d, ctx)

    res = dopri5(fun, t_a, x, t_b, rtol=opts.rel_tol, atol=opts.abs_tol,
                 max_step=opts.max_step, t_eval=times, first_step=first_step)
    rec.write(idx, res.samples)
    return res.y_end, res.last_step


def _propagate_linear(real: LinearRealization, x, u, dt, cache):
    key = round(dt, 12)
    if key not in cache:
        n = real.n_states
        aug = np.zeros((n + 1, n + 1))
        aug[:n, :n] = real.A
        aug[:n, n] = real.B[:, 0]
        E = expm(aug * dt)
        cache[key] = (E[:n, :n], E[:n, n])
    Phi, gam = cache[key]
    return Phi @ x + gam * u


def _finish(model, rec, impulses) -> Trajectory:
    states = rec.states
    outputs = np.asarray(model.output(states), dtype=float).reshape(-1)
    return Trajectory(rec.grid, states, outputs, tuple(model.state_labels), model.name,
                      model.body_weight, impulses)


def integrate(model: ModelInstance, x0, input=0.0, span=(0.0, 1440.0),
              opts: IntegratorOptions | None = None, ctx: MealContext | None = None,
              method: str = "rk") -> Trajectory:
    """Integrate ``model`` from ``x0`` over ``span`` with a piecewise-constant input.

    ``input`` is a number (constant meal rate in mg/min) or a
    :class:`PiecewiseConstant`. The integrator restarts at every breakpoint
    so no step straddles an input discontinuity.
    """
    opts = opts or IntegratorOptions()
    t_a, t_b = map(float, span)
    if not t_b > t_a:
        raise ValueError(f"span must satisfy t_a < t_b, got {span}")
    x = np.array(x0, dtype=float)
    if x.shape != (model.n_states,):
        raise ValueError(f"x0 has shape {x.shape}, model {model.name!r} needs ({model.n_states},)")
    ctx = ctx or MealContext(t_meal=t_a)
    if isinstance(input, PiecewiseConstant):
        bps = [b for b in input.breakpoints if t_a < b < t_b]
        level = {b: v for b, v in zip(input.breakpoints, input.values)}
        start = input.initial
        for b, v in zip(input.breakpoints, input.values):
            if b <= t_a:
                start = v
        pieces = []
        edges = [t_a, *bps, t_b]
        current = start
        for a, b in zip(edges, edges[1:]):
            if a in level:
                current = level[a]
            pieces.append((a, b, current))
    else:
        d = float(input)
        pieces = [(t_a, t_b, d)]
    grid = _output_grid(t_a, t_b, opts.output_interval, [p[0] for p in pieces])
    rec = _Recorder(grid, x.size)
    h = None
    for a, b, d in pieces:
        x, h = _run_segment(model, x, a, b, d, ctx, opts, rec, method, h)
    return _finish(model, rec, [])


def simulate(model: ModelInstance, schedule: MealSchedule, horizon: float,
             x0=None, opts: IntegratorOptions | None = None, t0: float = 0.0,
             method: str = "rk") -> Trajectory:
    """Simulate a schedule that may mix impulse and step meals over ``[t0, horizon]``.

    ``method='expm'`` uses the exact matrix-exponential propagator and is
    only available for models with a linear realization.
    """
    opts = opts or IntegratorOptions()
    if not horizon > t0:
        raise ValueError(f"horizon must exceed the start time, got {horizon}")
    x = model.zero_state() if x0 is None else np.array(x0, dtype=float)
    if x.shape != (model.n_states,):
        raise ValueError(f"x0 has shape {x.shape}, model {model.name!r} needs ({model.n_states},)")
    events = [e for e in schedule if t0 <= e.time <= horizon]
    if any(e.is_impulse for e in events) and model.injection(x) is None:
        raise ValueError(f"model {model.name!r} exposes no input map f_d; impulse meals unavailable")

    # (start, end, rate, event-starting-here)
    pieces: list[tuple[float, float, float, MealEvent | None]] = []
    t = t0
    for e in events:
        if e.time > t:
            pieces.append((t, e.time, 0.0, None))
        if e.is_impulse:
            pieces.append((e.time, e.time, 0.0, e))
            t = e.time
        else:
            end = min(e.time + e.duration, horizon)
            pieces.append((e.time, end, e.rate, e))
            t = end
    if horizon > t:
        pieces.append((t, horizon, 0.0, None))

    extra = [p[0] for p in pieces] + [p[1] for p in pieces]
    grid = _output_grid(t0, horizon, opts.output_interval, extra)
    rec = _Recorder(grid, x.size)
    rec.write_at(t0, x)
    ctx = MealContext(t_meal=t0)
    impulses: list[ImpulseRecord] = []
    h = None
    for a, b, rate, event in pieces:
        if event is not None:
            ctx = model.begin_meal(x, event, ctx)
            if event.is_impulse:
                x_minus = x.copy()
                x = x_minus + np.asarray(model.injection(x_minus), dtype=float) * event.carbs
                impulses.append(ImpulseRecord(event.time, event.carbs, x_minus, x.copy()))
                rec.write_at(event.time, x)
                continue
        if b > a:
            x, h = _run_segment(model, x, a, b, rate, ctx, opts, rec, method, h)
            rec.write_at(b, x)
    return _finish(model, rec, impulses)


def simulate_step_meals(model, x0, schedule: MealSchedule, horizon: float,
                        opts: IntegratorOptions | None = None, **kw) -> Trajectory:
    if any(e.is_impulse for e in schedule):
        raise ValueError("simulate_step_meals needs every meal to have a duration > 0")
    return simulate(model, schedule, horizon, x0=x0, opts=opts, **kw)


def simulate_impulse_meals(model, x0, schedule: MealSchedule, horizon: float,
                           opts: IntegratorOptions | None = None, **kw) -> Trajectory:
    if any(not e.is_impulse for e in schedule):
        raise ValueError("simulate_impulse_meals needs every meal to have duration 0")
    if model.injection(model.zero_state()) is None:
        raise ValueError(f"model {model.name!r} exposes no input map f_d")
    return simulate(model, schedule, horizon, x0=x0, opts=opts, **kw)


def linear_step(realization: LinearRealization, x0, u, dt: float) -> np.ndarray:
    """Exact state after ``dt`` of ``x' = A x + B u`` with ``u`` held constant.

    Uses the exponential of the augmented matrix ``[[A, B u], [0, 0]] dt``,
    which is valid whether or not ``A`` is singular.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    A, B = realization.A, realization.B
    n = A.shape[0]
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if x0.size != n:
        raise ValueError(f"x0 has {x0.size} entries, A is {n}x{n}")
    if u.size != B.shape[1]:
        raise ValueError(f"u has {u.size} entries, B has {B.shape[1]} columns")
    aug = np.zeros((n + 1, n + 1))
    aug[:n, :n] = A
    aug[:n, n] = B @ u
    E = expm(aug * dt)
    return E[:n, :n] @ x0 + E[:n, n]


def steady_state(model: ModelInstance, abs_tol: float = 1e-10) -> np.ndarray:
    """Zero steady state of the autonomous dynamics (checked, then returned)."""
    x = model.zero_state()
    f = np.asarray(model.rhs(0.0, x, 0.0, MealContext()), dtype=float)
    if np.max(np.abs(f), initial=0.0) > abs_tol:
        raise ValueError(f"zero state is not a steady state of {model.name!r}")
    return x
