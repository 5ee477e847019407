"""Benchmark the numba-compiled kernels against their pure-Python forms.

Runs each hot kernel through its compiled dispatcher and through the
uncompiled .py_func, printing per-call times and the speedup.  Requires
numba (run without RICKER2_NO_NUMBA); the pure-Python fallback path of
the package itself can be exercised end to end with

    RICKER2_NO_NUMBA=1 python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from ricker2 import NUMBA_ENABLED, kernels


def timeit(fn, *args, repeat=5):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    a3 = np.array([1.0, 1.9, 0.8])
    a4 = np.array([1.4, 1.8, 1.6, 0.3])
    ts = np.array([2.17, 1.25, 5.35, 0.42, 6.53, 1.02])
    grid_prev = np.repeat(np.linspace(0.2, 2.5, 20), 20)
    grid_curr = np.tile(np.linspace(0.2, 2.5, 20), 20)
    xs = np.linspace(1e-6, 2.4, 4096)

    cases = [
        ("direct_orbit (1e6 steps)", kernels.direct_orbit,
         (a3, 1.0, 0.8, 1_000_000)),
        ("factored_orbit (1e6 steps)", kernels.factored_orbit,
         (a4, 0.3, -0.7, 1_000_000)),
        ("ricker_orbit (1e6 steps)", kernels.ricker_orbit,
         (a3, 1.0, 1, 0, 1_000_000)),
        ("g_chain (6e5 applications)", kernels.g_chain,
         (ts, 1.0, 600_000)),
        ("f_pow_grid (4096 pts, f^3)", kernels.f_pow_grid, (ts, xs, 3)),
        ("scan_windows (400 cells x 20600)", kernels.scan_windows,
         (a3, grid_prev, grid_curr, 20_000, 600)),
    ]

    if not NUMBA_ENABLED:
        print("numba disabled; timing the pure-Python path only\n")
        for name, fn, args in cases:
            t, _ = timeit(fn, *args, repeat=2)
            print(f"{name:36s} python {t * 1e3:10.2f} ms")
        return

    print(f"{'kernel':36s} {'numba':>12s} {'python':>12s} {'speedup':>9s}")
    for name, fn, args in cases:
        fn(*args)  # compile before timing
        t_jit, _ = timeit(fn, *args)
        t_py, _ = timeit(fn.py_func, *args, repeat=2)
        print(f"{name:36s} {t_jit * 1e3:10.2f} ms {t_py * 1e3:10.2f} ms "
              f"{t_py / t_jit:8.1f}x")


if __name__ == "__main__":
    main()
