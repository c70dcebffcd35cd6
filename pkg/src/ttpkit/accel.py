"""Numba acceleration toggle.

Hot row kernels are compiled with numba when it is importable and the
``TTPKIT_NO_NUMBA`` environment variable is unset (or falsy).  Setting
``TTPKIT_NO_NUMBA=1`` selects the pure-numpy fallback path; both paths
are exported by :mod:`ttpkit._kernels` so they can be benchmarked
against each other.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAS_NUMBA = numba is not None
USE_NUMBA = HAS_NUMBA and os.environ.get("TTPKIT_NO_NUMBA", "").lower() not in (
    "1",
    "true",
    "yes",
)


def maybe_njit(*args, **kwargs):
    """``numba.njit`` when acceleration is on, identity decorator otherwise."""
    if args and callable(args[0]):
        func = args[0]
        return numba.njit(func, **kwargs) if USE_NUMBA else func

    def wrap(func):
        return numba.njit(*args, **kwargs)(func) if USE_NUMBA else func

    return wrap
