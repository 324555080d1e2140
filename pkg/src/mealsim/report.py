"""Multi-model, multi-meal-size comparisons and their CSV / gnuplot output."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.integrate import trapezoid

from .engine import IntegratorOptions, MealSchedule, ModelInstance, Trajectory, simulate

__all__ = [
    "MAXIMA_DEADBAND",
    "SeriesSummary",
    "ComparisonReport",
    "count_local_maxima",
    "run_comparison",
    "write_csv",
    "read_csv",
    "emit_plot_script",
]

# mg/min; derivative changes below this are treated as integrator ripple
MAXIMA_DEADBAND = 1e-3


def count_local_maxima(y, deadband: float = MAXIMA_DEADBAND) -> int:
    """Number of strict ``+ -> -`` sign changes of the discrete derivative.

    Differences with magnitude at most ``deadband`` are dropped before the
    sign changes are counted, so flat stretches neither create nor split a
    maximum.
    """
    dy = np.diff(np.asarray(y, dtype=float))
    s = np.sign(dy[np.abs(dy) > deadband])
    return int(np.count_nonzero((s[:-1] > 0) & (s[1:] < 0)))


@dataclass(frozen=True)
class SeriesSummary:
    column: str
    label: str
    model_id: str
    carbs: float  # mg
    body_weight: float
    peak: float  # mg/min
    peak_time: float  # min
    n_maxima: int
    integral: float  # mg

    @property
    def peak_per_kg(self) -> float:
        return self.peak / self.body_weight

    @property
    def integral_per_kg(self) -> float:
        return self.integral / self.body_weight


@dataclass
class ComparisonReport:
    """Output series on one shared time grid plus per-series statistics."""

    times: np.ndarray
    series: dict[str, np.ndarray] = field(default_factory=dict)
    summaries: list[SeriesSummary] = field(default_factory=list)
    per_kg: bool = False
    deadband: float = MAXIMA_DEADBAND

    def columns(self) -> dict[str, np.ndarray]:
        """Series as written to CSV (divided by body weight when ``per_kg``)."""
        if not self.per_kg:
            return dict(self.series)
        bw = {s.column: s.body_weight for s in self.summaries}
        return {f"{k}_per_kg": v / bw[k] for k, v in self.series.items()}

    def summary(self, label: str, carbs: float) -> SeriesSummary:
        for s in self.summaries:
            if s.label == label and s.carbs == carbs:
                return s
        raise KeyError((label, carbs))

    def format_table(self) -> str:
        unit = "mg/kg/min" if self.per_kg else "mg/min"
        head = (f"{'series':<28} {'D [g]':>7} {'BW [kg]':>7} {'peak [' + unit + ']':>20} "
                f"{'t_peak [min]':>12} {'maxima':>6} {'int R_A [g]':>11}")
        rows = [head]
        for s in self.summaries:
            peak = s.peak_per_kg if self.per_kg else s.peak
            rows.append(f"{s.column:<28} {s.carbs / 1000:>7g} {s.body_weight:>7g} {peak:>20.6g} "
                        f"{s.peak_time:>12g} {s.n_maxima:>6d} {s.integral / 1000:>11.5g}")
        rows.append(f"local maxima counted with a {self.deadband:g} mg/min deadband on the discrete derivative")
        return "\n".join(rows)


def _summarize(column, label, model, D, tr: Trajectory, deadband) -> SeriesSummary:
    y = tr.outputs
    i = int(np.argmax(y)) if y.size else 0
    return SeriesSummary(column, label, model.name, D, float(model.body_weight), float(y[i]),
                         float(tr.times[i]), count_local_maxima(y, deadband),
                         float(trapezoid(y, tr.times)))


def run_comparison(models: Sequence[tuple[str, ModelInstance]], carb_list: Sequence[float],
                   horizon: float = 1440.0, opts: IntegratorOptions | None = None,
                   meal_time: float = 0.0, duration: float = 0.0, per_kg: bool = False,
                   deadband: float = MAXIMA_DEADBAND, workers: int = 1) -> ComparisonReport:
    """Simulate every ``(label, model)`` for every meal size ``D`` in mg.

    Each run is a single meal at ``meal_time``, an impulse when ``duration``
    is zero.
    """
    if not models:
        raise ValueError("need at least one model")
    jobs = [(label, model, float(D)) for label, model in models for D in carb_list]

    def one(job):
        label, model, D = job
        return simulate(model, MealSchedule.single(D, meal_time, duration), horizon, opts=opts)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            runs = list(pool.map(one, jobs))
    else:
        runs = [one(j) for j in jobs]

    times = runs[0].times if runs else np.empty(0)
    report = ComparisonReport(times, per_kg=per_kg, deadband=deadband)
    for (label, model, D), tr in zip(jobs, runs):
        if not np.array_equal(tr.times, times):
            raise RuntimeError("simulations returned different output grids")
        column = f"{label}_{D / 1000:g}g"
        report.series[column] = tr.outputs
        report.summaries.append(_summarize(column, label, model, D, tr, deadband))
    return report


def write_csv(data, path, per_kg: bool = False) -> Path:
    """Write a trajectory or report as CSV: ``time_min`` then one column per series.

    Values use 17 significant digits so the file parses back bit-exactly.
    A trajectory is written as ``R_A`` (plus ``R_A_per_kg`` on request)
    followed by its states.
    """
    if isinstance(data, Trajectory):
        cols = {"R_A": data.outputs}
        if per_kg:
            if data.body_weight is None:
                raise ValueError("trajectory carries no body weight")
            cols["R_A_per_kg"] = data.per_kg_outputs
        cols.update({label: data.states[:, i] for i, label in enumerate(data.state_labels)})
        times = data.times
    else:
        cols = data.columns()
        times = data.times
    path = Path(path)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(["time_min", *cols]) + "\n")
        values = [np.asarray(v, dtype=float) for v in cols.values()]
        for i, t in enumerate(times):
            fh.write(",".join(format(float(x), ".17g") for x in (t, *(v[i] for v in values))) + "\n")
    return path


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="ascii") as fh:
        header = fh.readline().rstrip("\n").split(",")
        rows = [[float(x) for x in line.split(",")] for line in fh if line.strip()]
    return header, np.array(rows, dtype=float).reshape(-1, len(header))


def emit_plot_script(report: ComparisonReport, path, csv_path) -> Path:
    """gnuplot script plotting every report column against time.

    The CSV is referenced relative to the script's directory.
    """
    path = Path(path)
    rel = os.path.relpath(Path(csv_path).resolve(), path.resolve().parent)
    ylabel = "R_A per body weight [mg/(kg min)]" if report.per_kg else "R_A [mg/min]"
    lines = [
        "# gnuplot script; run with: gnuplot -p " + path.name,
        "set datafile separator ','",
        "set key outside right",
        "set xlabel 'time [min]'",
        f"set ylabel '{ylabel}'",
        "set grid",
    ]
    names = list(report.columns())
    if names:
        plots = [f"'{rel}' using 1:{i + 2} with lines title '{name.replace('_', ' ')}'"
                 for i, name in enumerate(names)]
        lines.append("plot " + ", \\\n     ".join(plots))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path
