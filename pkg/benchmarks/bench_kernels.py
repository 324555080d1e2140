"""Compiled vs numpy kernels: per-call timings and full CSTR-PFR simulations.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.
"""
import argparse
import timeit

import numpy as np

from mealsim import MealSchedule, _kernels_py, kernels, simulate
from mealsim.models import CstrPfrModel, CstrPfrParams, Moxon


def backends():
    out = {"python": (_kernels_py.fv_rhs, _kernels_py.sg_rhs)}
    if kernels.compiled_available():
        from mealsim import _kernels
        out["cython"] = (_kernels.fv_rhs, _kernels.sg_rhs)
    return out


def use(fv, sg):
    kernels.fv_rhs, kernels.sg_rhs = fv, sg


def kernel_args(model):
    """Representative rhs arguments taken from a live model state."""
    tr = simulate(model, MealSchedule.single(90000.0), 60.0)
    return tr.states[-1], tr.times[-1]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--calls", type=int, default=2000)
    args = ap.parse_args(argv)
    saved = (kernels.fv_rhs, kernels.sg_rhs)
    available = backends()
    if "cython" not in available:
        print("compiled extension not built; timing the numpy path only")

    P = CstrPfrParams()
    cases = [("fv", 100), ("fv", 400), ("sg", 16), ("sg", 32)]
    print(f"{'case':<10} {'backend':<8} {'rhs call [us]':>14} {'simulation [ms]':>16}")
    rows = {}
    try:
        for scheme, res in cases:
            model = CstrPfrModel(P, Moxon(), scheme=scheme, resolution=res)
            x, t = kernel_args(model)
            for name, (fv, sg) in available.items():
                use(fv, sg)
                per_call = min(timeit.repeat(lambda: model.rhs(t, x, 0.0, None), number=args.calls,
                                             repeat=args.repeat)) / args.calls
                sim = min(timeit.repeat(lambda: simulate(model, MealSchedule.single(90000.0), 1440.0),
                                        number=1, repeat=args.repeat))
                rows[(scheme, res, name)] = sim
                print(f"{scheme}{res:<8} {name:<8} {per_call * 1e6:>14.2f} {sim * 1e3:>16.1f}")
    finally:
        use(*saved)
    if "cython" in available:
        print()
        for scheme, res in cases:
            r = rows[(scheme, res, "python")] / rows[(scheme, res, "cython")]
            print(f"{scheme}{res}: compiled speed-up {r:.2f}x on the full simulation")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
