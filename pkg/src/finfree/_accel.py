"""Numba switch.

Kernels are compiled with numba when it is importable and the environment
variable ``FINFREE_DISABLE_NUMBA`` is unset (or ``0``). Otherwise the pure
numpy/Python implementations are used. The flag is read once at import.
"""
import os

_flag = os.environ.get("FINFREE_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _flag not in ("", "0", "false", "no")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAS_NUMBA = numba is not None
USE_NUMBA = HAS_NUMBA and not DISABLED_BY_ENV


def njit(func):
    """``numba.njit(cache=True)`` when numba is installed, else identity."""
    if not HAS_NUMBA:
        return func
    return numba.njit(cache=True, nogil=True)(func)
