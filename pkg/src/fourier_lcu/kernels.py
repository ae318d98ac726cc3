"""Backend selection for the hot loops.

The compiled extension is used when it imported cleanly; setting
``FOURIER_LCU_PURE_PYTHON=1`` forces the pure-Python versions.
"""

import os

from . import _kernels_py

PURE_PYTHON_ENV = "FOURIER_LCU_PURE_PYTHON"


def _load():
    if os.environ.get(PURE_PYTHON_ENV, "") not in ("", "0"):
        return _kernels_py, "python"
    try:
        from . import _kernels
    except ImportError:
        return _kernels_py, "python"
    return _kernels, "cython"


_backend, BACKEND = _load()
fista_gram = _backend.fista_gram
