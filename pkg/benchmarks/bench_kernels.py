"""Numba vs pure-numpy timings for the hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both variants are imported directly, so the FINFREE_DISABLE_NUMBA flag does
not matter here. The first numba call (compilation or cache load) is excluded
from the timings.
"""
import argparse
import time

import numpy as np

from finfree import _kernels as k
from finfree._accel import HAS_NUMBA


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cases(rng):
    d = 4
    g = rng.standard_normal((20_000, d, d))
    sym = g + np.swapaxes(g, 1, 2)
    eig = rng.standard_normal((100_000, d))
    ints = rng.integers(-3, 4, size=(20_000, 5, 5)).astype(np.int64)
    poly = np.poly(np.arange(1.0, 9.0))[::-1].copy()
    return [
        ("jacobi d=4 x20k", k._jacobi_eigvals_numba, k._jacobi_eigvals_numpy, (sym,)),
        ("elem-sym d=4 x100k", k._elementary_symmetric_numba, k._elementary_symmetric_numpy, (eig,)),
        ("charpoly int d=5 x20k", k._charpoly_int_batch_numba, k._charpoly_int_batch_numpy, (ints,)),
        ("newton maxroot d=8", lambda c: k._newton_maxroot_numba(c, 100.0, 200),
         lambda c: k._newton_maxroot_numpy(c, 100.0, 200), (poly,)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not HAS_NUMBA:
        print("numba is not installed; nothing to compare")
        return
    rng = np.random.default_rng(0)
    print(f"{'kernel':<24}{'numba [s]':>12}{'numpy [s]':>12}{'speedup':>10}")
    for name, fast, slow, inputs in cases(rng):
        a, b = fast(*inputs), slow(*inputs)  # warm up, and check they agree
        if isinstance(a, tuple):
            assert abs(a[0] - b[0]) <= 1e-12 * max(1.0, abs(b[0]))
        else:
            assert np.allclose(a, b, rtol=1e-10, atol=1e-10)
        tf = best_of(lambda: fast(*inputs), args.repeat)
        ts = best_of(lambda: slow(*inputs), args.repeat)
        print(f"{name:<24}{tf:>12.4f}{ts:>12.4f}{ts / tf:>9.1f}x")


if __name__ == "__main__":
    main()
