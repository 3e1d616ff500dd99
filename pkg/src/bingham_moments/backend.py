"""Kernel backend selection: numba-jitted or pure numpy/Python.

Set the environment variable ``BINGHAM_NO_NUMBA=1`` before import to force the
pure-Python fallback path (the same kernel source runs undecorated).
"""

import os

_FALLBACK = os.environ.get("BINGHAM_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

if not _FALLBACK:
    try:
        from numba import njit as _njit
    except ImportError:
        _FALLBACK = True

USING_NUMBA = not _FALLBACK


def jit(func):
    """Apply numba ``njit`` when available, otherwise return ``func`` unchanged."""
    if USING_NUMBA:
        return _njit(cache=True)(func)
    return func


def py_version(func):
    """Undecorated Python version of a kernel (the kernel itself in fallback mode)."""
    return getattr(func, "py_func", func)
