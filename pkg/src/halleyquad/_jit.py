"""Numba switch for the hot kernels.

Kernels are written once in a numba-compatible subset of Python.  When numba is
importable and ``HALLEYQUAD_DISABLE_NUMBA`` is unset (or falsy) they are compiled
with ``@njit``; otherwise the undecorated functions run as plain Python/NumPy.
The flag is read once, at import time.
"""

from __future__ import annotations

import os

DISABLE_ENV = "HALLEYQUAD_DISABLE_NUMBA"


def _disabled_by_env() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() in {"1", "true", "yes", "on"}


try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

USE_NUMBA = numba is not None and not _disabled_by_env()


def kernel(fn):
    """Compile ``fn`` with numba when enabled, else return it unchanged."""
    if USE_NUMBA:
        # error_model="numpy": float division by zero gives inf/nan instead of raising
        return numba.njit(cache=True, error_model="numpy")(fn)
    return fn


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"

