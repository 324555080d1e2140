"""Normalized simulation and numerical checks of linearity in the meal size.

A model is linear in ``D`` when every state, and therefore ``R_A``, scales
with the total carbohydrate mass for a fixed schedule shape. Such models
need one simulation with ``D = 1``; any other meal size is a rescaling.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .engine import IntegratorOptions, MealEvent, MealSchedule, ModelInstance, Trajectory, simulate

__all__ = [
    "LINEARITY_THRESHOLD",
    "NotLinearInD",
    "ScheduleShape",
    "NormalizedRun",
    "LinearityRow",
    "LinearityReport",
    "normalize",
    "scale_response",
    "verify_d_linearity",
]

# deviations above this are reported as NONLINEAR
LINEARITY_THRESHOLD = 1e-4


class NotLinearInD(ValueError):
    pass


@dataclass(frozen=True)
class ScheduleShape:
    """Meal times and durations with carbohydrate fractions summing to one.

    ``duration_scales`` marks shapes whose meal durations would grow with
    the meal size; the input is then not linear in ``D`` and scaling is
    refused.
    """

    schedule: MealSchedule
    duration_scales: bool = False

    def __post_init__(self):
        total = self.schedule.total_carbs
        if len(self.schedule) == 0 or not np.isclose(total, 1.0, rtol=1e-12, atol=0):
            raise ValueError(f"shape fractions must sum to 1, got {total}")

    @classmethod
    def from_schedule(cls, schedule: MealSchedule, duration_scales: bool = False) -> "ScheduleShape":
        total = schedule.total_carbs
        if not total > 0:
            raise ValueError("schedule carries no carbohydrate")
        return cls(schedule.scaled(1.0 / total), duration_scales)

    @classmethod
    def impulse(cls, time: float = 0.0) -> "ScheduleShape":
        return cls(MealSchedule((MealEvent(time, 1.0),)))

    @property
    def descriptor(self) -> str:
        parts = [f"{e.carbs:g}@{e.time:g}" + (f"/{e.duration:g}min" if e.duration else "")
                 for e in self.schedule]
        return " + ".join(parts)

    def for_carbs(self, D: float) -> MealSchedule:
        return self.schedule.scaled(D)


@dataclass(frozen=True)
class NormalizedRun:
    """Response to one unit (mg) of carbohydrate: states ``x / D`` and output ``R_A / D``."""

    base: Trajectory
    model_id: str
    shape: ScheduleShape
    linear_in_d: bool


def normalize(model: ModelInstance, shape: ScheduleShape, horizon: float = 1440.0,
              opts: IntegratorOptions | None = None, method: str = "rk") -> NormalizedRun:
    base = simulate(model, shape.for_carbs(1.0), horizon, opts=opts, method=method)
    return NormalizedRun(base, model.name, shape, bool(model.linear_in_d))


def scale_response(run: NormalizedRun, D: float) -> Trajectory:
    """Trajectory for a meal of ``D`` mg obtained by rescaling the unit run."""
    if not run.linear_in_d:
        raise NotLinearInD(
            f"model {run.model_id!r} is not linear in D (its gastric emptying depends on the "
            "current state in a nonlinear way); simulate each meal size directly")
    if run.shape.duration_scales:
        raise NotLinearInD("meal durations grow with D, so the input d is not linear in D")
    if D < 0:
        raise ValueError("D must be non-negative")
    return run.base.scaled(D)


def _rel_sup(a: np.ndarray, b: np.ndarray) -> float:
    scale = float(np.max(np.abs(b), initial=0.0))
    diff = float(np.max(np.abs(a - b), initial=0.0))
    if scale == 0.0:
        return 0.0 if diff == 0.0 else float("inf")
    return diff / scale


@dataclass(frozen=True)
class LinearityRow:
    D: float
    deviation: float
    peak: float


@dataclass
class LinearityReport:
    model_id: str
    shape: str
    threshold: float
    rows: list[LinearityRow] = field(default_factory=list)

    @property
    def max_deviation(self) -> float:
        return max((r.deviation for r in self.rows), default=0.0)

    @property
    def linear(self) -> bool:
        return self.max_deviation <= self.threshold

    @property
    def verdict(self) -> str:
        return "linear" if self.linear else "NONLINEAR"

    def format_table(self) -> str:
        lines = [f"model: {self.model_id}   shape: {self.shape}",
                 f"{'D [g]':>10}  {'peak R_A [mg/min]':>18}  {'rel. deviation':>14}"]
        for r in self.rows:
            lines.append(f"{r.D / 1000:>10g}  {r.peak:>18.6g}  {r.deviation:>14.3e}")
        lines.append(f"max deviation {self.max_deviation:.3e} (threshold {self.threshold:g}): {self.verdict}")
        return "\n".join(lines)


def verify_d_linearity(model: ModelInstance, shape: ScheduleShape, D_list: Sequence[float],
                       horizon: float = 1440.0, opts: IntegratorOptions | None = None,
                       threshold: float = LINEARITY_THRESHOLD, workers: int = 1) -> LinearityReport:
    """Compare direct simulations for each ``D`` (mg) with the rescaled unit run.

    The deviation is ``max |R_A,direct - D * R_A,unit| / max |R_A,direct|``.
    The rescaling is applied regardless of the model's declared linearity so
    that nonlinear models show up with a large deviation.
    """
    D_list = [float(D) for D in D_list]
    if len(D_list) < 2:
        raise ValueError("need at least two meal sizes")
    base = simulate(model, shape.for_carbs(1.0), horizon, opts=opts).outputs

    def one(D):
        direct = simulate(model, shape.for_carbs(D), horizon, opts=opts).outputs
        return LinearityRow(D, _rel_sup(D * base, direct), float(np.max(direct, initial=0.0)))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(one, D_list))
    else:
        rows = [one(D) for D in D_list]
    return LinearityReport(model.name, shape.descriptor, threshold, rows)
