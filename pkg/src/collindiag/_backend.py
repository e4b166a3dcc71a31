"""Pick the Jacobi kernel at import time.

The compiled kernel is used when it imports; set ``COLLINDIAG_PURE_PYTHON=1``
to force the pure-Python fallback (used by the benchmark and the
backend-agreement tests).
"""
import os

from . import _jacobi_py

jacobi_py = _jacobi_py.jacobi

try:
    from ._jacobi import jacobi as jacobi_ext
except ImportError:  # extension not built
    jacobi_ext = None

if jacobi_ext is not None and not os.environ.get("COLLINDIAG_PURE_PYTHON"):
    jacobi = jacobi_ext
    BACKEND = "cython"
else:
    jacobi = jacobi_py
    BACKEND = "python"

__all__ = ["jacobi", "jacobi_py", "jacobi_ext", "BACKEND"]
