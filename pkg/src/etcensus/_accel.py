"""Optional numba acceleration.

Kernels are written in the numba-compatible subset of Python so that the very
same source runs either JIT-compiled or as plain Python over numpy arrays.
Set ``ETCENSUS_NO_NUMBA=1`` to force the pure path (slow, but handy for
debugging and for cross-checking the compiled kernels).
"""

import os

_DISABLED = os.environ.get("ETCENSUS_NO_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    numba = None
    HAVE_NUMBA = False


def jit(fn):
    """Compile ``fn`` with ``numba.njit`` when acceleration is enabled."""
    if HAVE_NUMBA:
        return numba.njit(cache=True, nogil=True)(fn)
    return fn


def python_version(fn):
    """Return the uncompiled function behind a kernel."""
    return getattr(fn, "py_func", fn)
