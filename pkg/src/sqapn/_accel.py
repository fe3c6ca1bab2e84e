"""JIT backend selection.

Set ``SQAPN_DISABLE_JIT=1`` to force the pure-numpy kernels. When numba is
not importable the numpy path is used automatically.
"""

import os

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

JIT_DISABLED = os.environ.get("SQAPN_DISABLE_JIT", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = HAVE_NUMBA and not JIT_DISABLED


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise.

    The decorated function is always defined; whether callers dispatch to it
    is decided by ``USE_NUMBA``.
    """
    if not HAVE_NUMBA:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
    return numba.njit(*args, **kwargs)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
