"""Kernel backend selection.

The hot dynamic-programming kernels exist twice: a numba @njit version and a
pure-numpy version. The active backend is chosen once at import time from the
environment variable DLPP_BACKEND:

    DLPP_BACKEND=numba   force numba (ImportError if numba is missing)
    DLPP_BACKEND=numpy   force the pure-numpy fallback
    unset/empty          numba when importable, numpy otherwise

``benchmarks/bench_kernels.py`` times the two against each other.
"""

import os

_requested = os.environ.get("DLPP_BACKEND", "").strip().lower()

if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(f"DLPP_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numpy":
    HAS_NUMBA = False
else:
    try:
        import numba  # noqa: F401

        HAS_NUMBA = True
    except ImportError:
        if _requested == "numba":
            raise
        HAS_NUMBA = False

BACKEND = "numba" if HAS_NUMBA else "numpy"


def active_backend() -> str:
    """Name of the kernel backend in use ('numba' or 'numpy')."""
    return BACKEND
