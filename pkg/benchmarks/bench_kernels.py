#!/usr/bin/env python3
"""Benchmark the pairwise cosine kernel: numba @njit vs pure numpy.

Usage:
    python benchmarks/bench_kernels.py [--sizes 16,40,64] [--dims 96,768,2304] [--repeat 30]

The jitted kernel is compiled once before timing.  Set TOOLKIT_NO_NUMBA=1
to confirm the fallback is what the library would use.
"""

import argparse
import time

import numpy as np

from tempograph import avg_hausdorff, kernels


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="16,40,64")
    parser.add_argument("--dims", default="96,768,2304")
    parser.add_argument("--repeat", type=int, default=30)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    dims = [int(d) for d in args.dims.split(",")]

    rng = np.random.default_rng(0)
    print(f"numba available/enabled: {kernels.NUMBA_ENABLED}")
    header = f"{'n x n':>9} {'dim':>6} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in sizes:
        for d in dims:
            a = rng.normal(size=(n, d))
            b = rng.normal(size=(n, d))
            na = np.linalg.norm(a, axis=1)
            nb = np.linalg.norm(b, axis=1)
            t_numpy = time_call(
                lambda: kernels.pairwise_cosine_numpy(a, b, na, nb), args.repeat
            )
            if kernels.NUMBA_ENABLED:
                kernels.pairwise_cosine_numba(a, b, na, nb)  # compile before timing
                t_numba = time_call(
                    lambda: kernels.pairwise_cosine_numba(a, b, na, nb), args.repeat
                )
                ratio = f"{t_numpy / t_numba:8.2f}x"
                t_numba_ms = f"{1e3 * t_numba:12.3f}"
            else:
                ratio, t_numba_ms = f"{'-':>9}", f"{'-':>12}"
            print(f"{n:>4}x{n:<4} {d:>6} {1e3 * t_numpy:12.3f} {t_numba_ms} {ratio}")

    # end-to-end: the set distance exactly as training would call it
    a = rng.normal(size=(40, 3 * 768))
    b = rng.normal(size=(40, 3 * 768))
    t = time_call(lambda: avg_hausdorff(a, b), args.repeat)
    print(f"\navg_hausdorff 40x40 @ dim {3 * 768}: {1e3 * t:.3f} ms per call")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
