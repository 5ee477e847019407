"""Optional numba acceleration for the hot iteration kernels.

The kernels in :mod:`ricker2.kernels` are plain Python functions written
against numpy arrays.  When numba is importable (and not disabled) they
are compiled with ``@njit``; otherwise the same source runs as pure
Python.  Set the environment variable ``RICKER2_NO_NUMBA=1`` before
import to force the pure-Python path, e.g. for debugging or benchmarking
(see ``benchmarks/bench_kernels.py``).
"""

import os

_flag = os.environ.get("RICKER2_NO_NUMBA", "").strip().lower()
NUMBA_ENABLED = _flag not in ("1", "true", "yes", "on")

if NUMBA_ENABLED:
    try:
        from numba import njit, prange
    except ImportError:  # pragma: no cover - exercised via RICKER2_NO_NUMBA
        NUMBA_ENABLED = False

if not NUMBA_ENABLED:
    def njit(*args, **kwargs):
        """No-op stand-in for numba.njit; returns the function unchanged."""
        if args and callable(args[0]):
            return args[0]

        def decorate(func):
            return func

        return decorate

    prange = range
