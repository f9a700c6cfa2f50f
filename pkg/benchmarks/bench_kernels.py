"""Benchmark the packed GF(2) kernels: numba JIT versus pure numpy.

Runs row reduction and matrix multiplication over random dense
matrices at a few sizes and prints a timing table.  Usage:

    python benchmarks/bench_kernels.py [--sizes 256 512 1024] [--repeats 3]
"""

import argparse
import time

import numpy as np

from dgf2 import _kernels
from dgf2.gf2 import _pack


def bench_rref(impl, words, rows, cols, repeats):
    best = float("inf")
    for _ in range(repeats):
        work = words.copy()
        t0 = time.perf_counter()
        impl(work, rows, cols)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_mul(impl, a_words, cols_a, b_words, out_shape, repeats):
    best = float("inf")
    for _ in range(repeats):
        out = np.zeros(out_shape, dtype=np.uint64)
        t0 = time.perf_counter()
        impl(a_words, cols_a, b_words, out)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[256, 512, 1024])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rref_np, mul_np = _kernels.NUMPY_IMPL
    if _kernels.NUMBA_IMPL is None:
        print("numba unavailable (or disabled); timing the numpy path only")
        rref_jit = mul_jit = None
    else:
        rref_jit, mul_jit = _kernels.NUMBA_IMPL
        # trigger compilation outside the timed region
        warm = _pack(np.random.default_rng(0).integers(0, 2, size=(8, 8), dtype=np.uint8))
        rref_jit(warm.copy(), 8, 8)
        mul_jit(warm, 8, warm.copy(), np.zeros_like(warm))

    print(f"{'op':<8}{'n':>6}{'numpy (s)':>12}{'numba (s)':>12}{'speedup':>10}")
    rng = np.random.default_rng(42)
    for n in args.sizes:
        dense = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
        words = _pack(dense)
        t_np = bench_rref(rref_np, words, n, n, args.repeats)
        if rref_jit is not None:
            t_jit = bench_rref(rref_jit, words, n, n, args.repeats)
            print(f"{'rref':<8}{n:>6}{t_np:>12.4f}{t_jit:>12.4f}{t_np / t_jit:>9.1f}x")
        else:
            print(f"{'rref':<8}{n:>6}{t_np:>12.4f}{'-':>12}{'-':>10}")

        b_words = _pack(rng.integers(0, 2, size=(n, n), dtype=np.uint8))
        t_np = bench_mul(mul_np, words, n, b_words, b_words.shape, args.repeats)
        if mul_jit is not None:
            t_jit = bench_mul(mul_jit, words, n, b_words, b_words.shape, args.repeats)
            print(f"{'matmul':<8}{n:>6}{t_np:>12.4f}{t_jit:>12.4f}{t_np / t_jit:>9.1f}x")
        else:
            print(f"{'matmul':<8}{n:>6}{t_np:>12.4f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
