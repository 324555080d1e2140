"""Kernel backend selection.

The compiled Cython kernels are used when the extension was built;
otherwise the numpy implementations are used. Setting the environment
variable ``MEALSIM_PURE_PYTHON=1`` forces the numpy path.
"""
import os

from . import _kernels_py

BACKEND = "python"
fv_rhs = _kernels_py.fv_rhs
sg_rhs = _kernels_py.sg_rhs

if os.environ.get("MEALSIM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None
    if _compiled is not None:
        BACKEND = "cython"
        fv_rhs = _compiled.fv_rhs
        sg_rhs = _compiled.sg_rhs


def compiled_available() -> bool:
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        return False
    return True


__all__ = ["BACKEND", "fv_rhs", "sg_rhs", "compiled_available"]
