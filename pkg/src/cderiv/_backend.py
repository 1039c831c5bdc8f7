"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``CDERIV_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

if os.environ.get("CDERIV_PURE_PYTHON", "") not in ("", "0"):
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"

mul_terms = kernels.mul_terms
add_terms = kernels.add_terms
rref_int = kernels.rref_int
