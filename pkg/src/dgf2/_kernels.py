"""Bit-packed GF(2) kernels: row reduction and row-XOR accumulation.

Matrices are stored row-major as uint64 words, 64 column bits per word,
little-endian within a word (column j lives in word j >> 6, bit j & 63).

The two inner loops below dominate the runtime of every homology
computation in the package, so they are JIT-compiled with numba when it
is importable.  Setting ``DGF2_DISABLE_NUMBA=1`` in the environment (or
running without numba installed) selects pure-numpy fallbacks with the
same semantics.  ``benchmarks/bench_kernels.py`` times both paths.
"""

from __future__ import annotations

import os

import numpy as np

_ONE = np.uint64(1)


# -- pure numpy implementations ------------------------------------------

def _rref_inplace_np(w, rows, cols):
    """Reduce ``w`` (rows x words) in place; pivots searched in the first
    ``cols`` bits, row operations applied across the full word width.

    Returns the array of pivot column indices (length = rank).
    """
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    npiv = 0
    for col in range(cols):
        wi = col >> 6
        mask = _ONE << np.uint64(col & 63)
        hot = (w[:, wi] & mask) != 0
        below = np.nonzero(hot[npiv:])[0]
        if below.size == 0:
            continue
        pr = npiv + int(below[0])
        if pr != npiv:
            w[[npiv, pr]] = w[[pr, npiv]]
            hot[npiv], hot[pr] = hot[pr], hot[npiv]
        hot[npiv] = False
        if hot.any():
            w[hot] ^= w[npiv]
        pivots[npiv] = col
        npiv += 1
        if npiv == rows:
            break
    return pivots[:npiv].copy()


def _mul_acc_np(a, cols_a, b, out):
    """out[i] ^= XOR of b[k] over set bits k of row i of a (packed)."""
    for col in range(cols_a):
        wi = col >> 6
        mask = _ONE << np.uint64(col & 63)
        hot = (a[:, wi] & mask) != 0
        if hot.any():
            out[hot] ^= b[col]


# -- numba implementations ------------------------------------------------

def _build_numba():
    from numba import njit

    @njit(cache=True)
    def rref_inplace(w, rows, cols):  # pragma: no cover - jitted
        wpr = w.shape[1]
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        npiv = 0
        for col in range(cols):
            wi = col >> 6
            mask = np.uint64(1) << np.uint64(col & 63)
            pr = -1
            for r in range(npiv, rows):
                if w[r, wi] & mask:
                    pr = r
                    break
            if pr < 0:
                continue
            if pr != npiv:
                for k in range(wpr):
                    tmp = w[pr, k]
                    w[pr, k] = w[npiv, k]
                    w[npiv, k] = tmp
            for r in range(rows):
                if r != npiv and (w[r, wi] & mask):
                    for k in range(wpr):
                        w[r, k] ^= w[npiv, k]
            pivots[npiv] = col
            npiv += 1
            if npiv == rows:
                break
        return pivots[:npiv].copy()

    @njit(cache=True)
    def mul_acc(a, cols_a, b, out):  # pragma: no cover - jitted
        rows_a = a.shape[0]
        wpr = b.shape[1]
        for i in range(rows_a):
            for col in range(cols_a):
                if a[i, col >> 6] & (np.uint64(1) << np.uint64(col & 63)):
                    for k in range(wpr):
                        out[i, k] ^= b[col, k]

    return rref_inplace, mul_acc


NUMPY_IMPL = (_rref_inplace_np, _mul_acc_np)
NUMBA_IMPL = None

if os.environ.get("DGF2_DISABLE_NUMBA", "") not in ("1", "true", "yes"):
    try:
        NUMBA_IMPL = _build_numba()
    except ImportError:
        NUMBA_IMPL = None

JIT_ENABLED = NUMBA_IMPL is not None

if JIT_ENABLED:
    rref_inplace, mul_acc = NUMBA_IMPL
else:
    rref_inplace, mul_acc = NUMPY_IMPL
