"""Backend selection for the compiled kernels.

Kernels are compiled with numba when it is importable, unless the
environment variable ``NONRECIP_DISABLE_NUMBA`` is set to a truthy value, in
which case the pure-numpy implementations in :mod:`nonrecip.kernels` are
used.  The flag is read once at import time.
"""
import os

_FLAG = "NONRECIP_DISABLE_NUMBA"

try:
    import numba

    HAVE_NUMBA = True
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the bundled TBB is too old for numba; skip probing it
        numba.config.THREADING_LAYER = "omp"
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get(_FLAG, "").strip().lower() not in {
    "1",
    "true",
    "yes",
    "on",
}


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise an identity decorator."""
    kwargs.setdefault("cache", True)
    if not HAVE_NUMBA:
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn
    return numba.njit(*args, **kwargs)


# numba.prange behaves as range when called from uncompiled code
prange = numba.prange if HAVE_NUMBA else range


def backend_name():
    return "numba" if USE_NUMBA else "numpy"
