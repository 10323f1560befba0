"""Kernel dispatch: compiled extension when available, NumPy otherwise.

Set LOSSYBOUNDS_PURE_PYTHON=1 to force the NumPy path.
"""
import os

from . import _kernels_py as python_backend

compiled_backend = None
if not os.environ.get("LOSSYBOUNDS_PURE_PYTHON"):
    try:
        from . import _kernels as compiled_backend
    except ImportError:
        compiled_backend = None

_active = compiled_backend if compiled_backend is not None else python_backend
BACKEND = "cython" if compiled_backend is not None and _active is compiled_backend else "numpy"

nearest_sq = _active.nearest_sq
cell_sums = _active.cell_sums
