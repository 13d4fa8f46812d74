"""Select the RK4 backend at import.

The compiled kernel is used when the extension was built; set
``PU_OSCILLATOR_PURE=1`` to force the NumPy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
rk4_linear = _kernels_py.rk4_linear

if not os.environ.get("PU_OSCILLATOR_PURE"):
    try:
        from ._kernels import rk4_linear  # noqa: F811
    except ImportError:
        pass
    else:
        BACKEND = "cython"

__all__ = ["BACKEND", "rk4_linear"]
