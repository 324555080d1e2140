"""Command line interface: ``mealsim <run|compare|check-linearity|delay-demo|list-models>``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np
from scipy.integrate import trapezoid

from . import delay
from .config import DEFAULT_CARBS_G, MG_PER_G, ConfigError, ModelConfig, ScenarioConfig, load_config, parse_carbs
from .engine import MealSchedule, simulate
from .linearity import ScheduleShape, verify_d_linearity
from .models import CATALOG
from .report import emit_plot_script, run_comparison, write_csv


def _overrides(pairs) -> dict[str, float]:
    out = {}
    for pair in pairs or ():
        key, sep, value = pair.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {pair!r}")
        try:
            out[key.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"--set {key}: expected a number, got {value!r}") from None
    return out


def _scenario(args) -> ScenarioConfig:
    """Config file if given, otherwise the command-line model list; flags override either."""
    if args.config:
        cfg = load_config(args.config)
    else:
        ids = [m.strip() for m in (args.model or "hovorka").split(",") if m.strip()]
        for mid in ids:
            if mid not in CATALOG:
                raise ConfigError(f"unknown model {mid!r}; see 'mealsim list-models'")
        over = _overrides(getattr(args, "set", None))
        if over and len(ids) != 1:
            raise ConfigError("--set needs exactly one model")
        cfg = ScenarioConfig(models=[ModelConfig(mid, mid, dict(over)) for mid in ids],
                             schedule=MealSchedule())
    if getattr(args, "carbs", None):
        cfg.carbs = parse_carbs(args.carbs)
    if getattr(args, "horizon", None) is not None:
        if not args.horizon > 0:
            raise ConfigError("--horizon must be positive")
        cfg.horizon = args.horizon
    if args.scheme:
        cfg.scheme = args.scheme
    if args.resolution:
        cfg.resolution = args.resolution
    if args.per_kg:
        cfg.per_kg = True
    if args.out:
        cfg.out = args.out
    return cfg


def _out_dir(cfg: ScenarioConfig) -> Path:
    out = Path(cfg.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _models(cfg):
    # a model failing to build (e.g. an override rejected by validation) surfaces as ConfigError
    try:
        return [(m.label, m.build(cfg.scheme, cfg.resolution)) for m in cfg.models]
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def cmd_run(args) -> int:
    cfg = _scenario(args)
    schedule = cfg.schedule
    if len(schedule) == 0:
        carbs = cfg.carbs[0] if args.carbs else 90.0 * MG_PER_G
        schedule = MealSchedule.single(carbs, 0.0, args.duration)
    out = _out_dir(cfg)
    for label, model in _models(cfg):
        tr = simulate(model, schedule, cfg.horizon, opts=cfg.options)
        path = write_csv(tr, out / f"{label}.csv", per_kg=cfg.per_kg)
        i = int(np.argmax(tr.outputs))
        print(f"{label}: peak R_A {tr.outputs[i]:.6g} mg/min at {tr.times[i]:g} min -> {path}")
    return 0


def cmd_compare(args) -> int:
    cfg = _scenario(args)
    report = run_comparison(_models(cfg), cfg.carbs, cfg.horizon, opts=cfg.options,
                            duration=args.duration, per_kg=cfg.per_kg, workers=args.jobs)
    out = _out_dir(cfg)
    csv = write_csv(report, out / "comparison.csv")
    script = emit_plot_script(report, out / "comparison.gp", csv)
    table = report.format_table()
    (out / "summary.txt").write_text(table + "\n", encoding="ascii")
    print(table)
    print(f"wrote {csv} and {script}")
    return 0


def cmd_check_linearity(args) -> int:
    cfg = _scenario(args)
    shape = ScheduleShape.from_schedule(cfg.schedule) if len(cfg.schedule) else ScheduleShape.impulse()
    nonlinear = 0
    for label, model in _models(cfg):
        rep = verify_d_linearity(model, shape, cfg.carbs, cfg.horizon, opts=cfg.options,
                                 threshold=args.threshold, workers=args.jobs)
        rep.model_id = label
        print(rep.format_table())
        print()
        nonlinear += not rep.linear
    return 1 if (args.strict and nonlinear) else 0


def cmd_delay_demo(args) -> int:
    spec = delay.DelaySpec(args.tau_d, args.stages)
    reals = {
        "lag": delay.lag_chain(spec),
        "pade": delay.pade_chain(spec),
        "transport": delay.transport_chain(spec),
        "algebraic": delay.algebraic_delay(spec),
    }
    t = np.arange(0.0, 5.0 * args.tau_d + 1e-9, args.tau_d / 100.0)
    if args.input == "step":
        u = np.ones_like(t)
        y_true = (t >= args.tau_d).astype(float)
        approx = {k: delay.step_response(r, t) for k, r in reals.items()}
    else:
        omega = 2 * np.pi / args.tau_d if args.omega is None else args.omega
        u = 1.0 - np.cos(omega * t)
        y_true = np.where(t >= args.tau_d, 1.0 - np.cos(omega * (t - args.tau_d)), 0.0)
        exo = delay.cosine_exosystem(omega)
        approx = {k: delay.response(r, exo, t) for k, r in reals.items()}
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    csv = out / "delay_demo.csv"
    cols = {"u": u, "y_true": y_true, **{f"y_{k}": v for k, v in approx.items()}}
    with open(csv, "w", encoding="ascii", newline="\n") as fh:
        fh.write(",".join(["time_min", *cols]) + "\n")
        for i in range(t.size):
            fh.write(",".join(format(float(x), ".17g") for x in (t[i], *(c[i] for c in cols.values()))) + "\n")
    titles = {"lag": "lag chain", "pade": "Pade(1,1) chain", "transport": "upwind transport",
              "algebraic": "algebraic (logistic gain)"}
    lines = ["# gnuplot script; run with: gnuplot -p delay_demo.gp",
             "set datafile separator ','", "set multiplot layout 2,2",
             "set xlabel 'time [min]'", "set grid"]
    for j, kind in enumerate(reals):
        lines.append(f"set title '{titles[kind]}, M = {args.stages}'")
        lines.append(f"plot 'delay_demo.csv' using 1:2 with lines title 'u', "
                     f"'' using 1:3 with lines title 'y', '' using 1:{4 + j} with lines title 'y approx'")
    lines.append("unset multiplot")
    (out / "delay_demo.gp").write_text("\n".join(lines) + "\n", encoding="ascii")
    for kind in reals:
        err = float(np.sqrt(trapezoid((approx[kind] - y_true) ** 2, t)))
        print(f"{kind:>10}: L2 error {err:.4g}")
    print(f"wrote {csv}")
    return 0


def cmd_list_models(args) -> int:
    head = f"{'id':<16} {'model':<28} {'equations':<14} {'states':<7} {'linear':<7} {'linear in D':<11}"
    print(head)
    print("-" * len(head))
    for mid, e in CATALOG.items():
        print(f"{mid:<16} {e.title:<28} {e.equation_types:<14} {e.n_states:<7} {e.linear:<7} {e.linear_in_d:<11}")
    print("\nCSTR-PFR state count: M = number of intestine unknowns (--resolution).")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mealsim", description="Meal glucose rate-of-appearance models.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, carbs_help):
        sp.add_argument("--config", help="scenario file (INI)")
        sp.add_argument("--model", help="model id(s), comma separated (ignored with --config)")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="parameter override for a single --model")
        sp.add_argument("--carbs", help=carbs_help)
        sp.add_argument("--horizon", type=float, help="simulation end [min]")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--scheme", choices=("fv", "sg"), help="CSTR-PFR discretization")
        sp.add_argument("--resolution", type=int, help="CSTR-PFR intestine resolution M")
        sp.add_argument("--per-kg", action="store_true", help="divide R_A by body weight")

    sp = sub.add_parser("run", help="simulate one scenario and write CSV")
    common(sp, "meal size [g] when the config has no [meals] (default 90)")
    sp.add_argument("--duration", type=float, default=0.0, help="meal duration [min]; 0 = impulse")
    sp.set_defaults(func=cmd_run)

    default = ", ".join(f"{c:g}" for c in DEFAULT_CARBS_G)
    sp = sub.add_parser("compare", help="models x meal sizes -> report, CSV and gnuplot script")
    common(sp, f"meal sizes [g], comma separated (default {default})")
    sp.add_argument("--duration", type=float, default=0.0, help="meal duration [min]; 0 = impulse")
    sp.add_argument("--jobs", type=int, default=1, help="concurrent simulations")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("check-linearity", help="verify that R_A scales with the meal size")
    common(sp, f"meal sizes [g], comma separated (default {default})")
    sp.add_argument("--threshold", type=float, default=1e-4, help="max relative deviation for 'linear'")
    sp.add_argument("--strict", action="store_true", help="exit with status 1 if any model is nonlinear")
    sp.add_argument("--jobs", type=int, default=1, help="concurrent simulations")
    sp.set_defaults(func=cmd_check_linearity)

    sp = sub.add_parser("delay-demo", help="exact vs approximate delays, four-panel dataset")
    sp.add_argument("--tau-d", type=float, default=10.0, help="delay [min] (default 10)")
    sp.add_argument("--stages", "-M", type=int, default=8, help="number of stages M (default 8)")
    sp.add_argument("--input", choices=("step", "cosine"), default="step")
    sp.add_argument("--omega", type=float, help="cosine input frequency [rad/min]")
    sp.add_argument("--out", help="output directory")
    sp.set_defaults(func=cmd_delay_demo)

    sp = sub.add_parser("list-models", help="print the model catalog")
    sp.set_defaults(func=cmd_list_models)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"mealsim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
