"""Numba switch.

Set ``MDPCONV_NO_NUMBA=1`` to run every kernel as plain Python/numpy.  The
flag is read once at import time.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("MDPCONV_NO_NUMBA", "") in ("", "0")


if USE_NUMBA:
    def njit(*args, **kwargs):
        kwargs.setdefault("cache", True)
        return numba.njit(*args, **kwargs)
else:
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f
