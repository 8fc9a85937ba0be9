"""Select the Jacobi kernel: compiled extension if built, else pure Python.

Set ``MINDISTINCT_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _jacobi_py

python_jacobi_sweeps = _jacobi_py.jacobi_sweeps

try:
    from ._jacobi import jacobi_sweeps as compiled_jacobi_sweeps
except ImportError:  # extension not built
    compiled_jacobi_sweeps = None

if compiled_jacobi_sweeps is not None and not os.environ.get("MINDISTINCT_PURE_PYTHON"):
    jacobi_sweeps = compiled_jacobi_sweeps
    BACKEND = "cython"
else:
    jacobi_sweeps = python_jacobi_sweeps
    BACKEND = "python"
