"""Dense linear algebra over the two-element field.

``Gf2Matrix`` is the workhorse behind every homology computation here:
a bit-packed, immutable matrix with XOR arithmetic.  Row reduction and
multiplication run on the packed words (see ``_kernels``); everything
else (kernels, solving, rank) is built on those two primitives.

Only the logical matrix is part of the contract; word size and layout
are internal.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import ValidationError


def _pack(dense):
    """Pack a uint8 0/1 array of shape (rows, cols) into uint64 words."""
    rows, cols = dense.shape
    wpr = (cols + 63) // 64
    if rows == 0 or cols == 0:
        return np.zeros((rows, wpr), dtype=np.uint64)
    padded = np.zeros((rows, wpr * 64), dtype=np.uint8)
    padded[:, :cols] = dense & 1
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed.view(np.uint64))


def _unpack(words, rows, cols):
    if rows == 0 or cols == 0:
        return np.zeros((rows, cols), dtype=np.uint8)
    bits = np.unpackbits(words.view(np.uint8), axis=1, bitorder="little")
    return np.ascontiguousarray(bits[:, :cols])


class Gf2Matrix:
    """Immutable dense matrix over F2, bit-packed row-major."""

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows, cols, words):
        self.rows = rows
        self.cols = cols
        words.setflags(write=False)
        self.words = words

    # -- constructors ----------------------------------------------------

    @classmethod
    def zeros(cls, rows, cols):
        wpr = (cols + 63) // 64
        return cls(rows, cols, np.zeros((rows, wpr), dtype=np.uint64))

    @classmethod
    def identity(cls, n):
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_dense(cls, arr):
        arr = np.asarray(arr, dtype=np.uint8)
        if arr.ndim != 2:
            raise ValidationError("expected a 2d array")
        return cls(arr.shape[0], arr.shape[1], _pack(arr))

    @classmethod
    def from_rows(cls, rows_list, cols=None):
        rows_list = [list(r) for r in rows_list]
        if cols is None:
            cols = len(rows_list[0]) if rows_list else 0
        dense = np.array(rows_list, dtype=np.uint8).reshape(len(rows_list), cols)
        return cls.from_dense(dense)

    @classmethod
    def from_columns(cls, cols_list, rows):
        dense = np.zeros((rows, len(cols_list)), dtype=np.uint8)
        for j, col in enumerate(cols_list):
            for i in col:
                dense[i, j] = 1
        return cls.from_dense(dense)

    # -- basics ------------------------------------------------------------

    def to_dense(self):
        return _unpack(self.words, self.rows, self.cols)

    def get(self, i, j):
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError((i, j))
        return int((self.words[i, j >> 6] >> np.uint64(j & 63)) & np.uint64(1))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_zero(self):
        return not self.words.any()

    def __eq__(self, other):
        if not isinstance(other, Gf2Matrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.words, other.words)
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self):
        return f"Gf2Matrix({self.rows}x{self.cols})"

    def __str__(self):
        """Debug dump: rows of '0'/'1' characters, one row per line."""
        dense = self.to_dense()
        return "\n".join("".join(str(b) for b in row) for row in dense)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValidationError(f"shape mismatch {self.shape} + {other.shape}")
        return Gf2Matrix(self.rows, self.cols, self.words ^ other.words)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValidationError(f"shape mismatch {self.shape} @ {other.shape}")
        out = np.zeros((self.rows, other.words.shape[1]), dtype=np.uint64)
        if self.rows and self.cols and other.cols:
            _kernels.mul_acc(self.words, self.cols, np.ascontiguousarray(other.words), out)
        return Gf2Matrix(self.rows, other.cols, out)

    def transpose(self):
        return Gf2Matrix.from_dense(self.to_dense().T)

    def kron(self, other):
        """Kronecker product (used for tensor-square complexes)."""
        return Gf2Matrix.from_dense(np.kron(self.to_dense(), other.to_dense()))

    # -- slicing and stacking -------------------------------------------------

    def take_columns(self, idx):
        idx = list(idx)
        dense = self.to_dense()
        return Gf2Matrix.from_dense(dense[:, idx].reshape(self.rows, len(idx)))

    def take_rows(self, idx):
        idx = list(idx)
        dense = self.to_dense()
        return Gf2Matrix.from_dense(dense[idx, :].reshape(len(idx), self.cols))

    @staticmethod
    def hstack(mats):
        mats = list(mats)
        rows = mats[0].rows
        dense = np.hstack([m.to_dense() for m in mats]) if mats else np.zeros((rows, 0), np.uint8)
        return Gf2Matrix.from_dense(dense)

    @staticmethod
    def vstack(mats):
        mats = list(mats)
        cols = mats[0].cols
        dense = np.vstack([m.to_dense() for m in mats]) if mats else np.zeros((0, cols), np.uint8)
        return Gf2Matrix.from_dense(dense)

    # -- elimination -----------------------------------------------------------

    def rref(self):
        """Reduced row echelon form.

        Returns ``(reduced, pivots, transform)`` with
        ``transform @ self == reduced`` and ``pivots`` strictly increasing.
        """
        aug_cols = self.cols + self.rows
        work = np.zeros((self.rows, (aug_cols + 63) // 64), dtype=np.uint64)
        wpr = self.words.shape[1]
        work[:, :wpr] = self.words
        # append an identity block to accumulate the transform
        for i in range(self.rows):
            j = self.cols + i
            work[i, j >> 6] |= np.uint64(1) << np.uint64(j & 63)
        pivots = _kernels.rref_inplace(work, self.rows, self.cols)
        reduced_dense = _unpack(work, self.rows, aug_cols)
        reduced = Gf2Matrix.from_dense(reduced_dense[:, : self.cols])
        transform = Gf2Matrix.from_dense(reduced_dense[:, self.cols :])
        return reduced, tuple(int(p) for p in pivots), transform

    def rank(self):
        work = np.ascontiguousarray(self.words.copy())
        pivots = _kernels.rref_inplace(work, self.rows, self.cols)
        return len(pivots)

    def kernel_basis(self):
        """Matrix whose columns form a basis of the right kernel."""
        reduced, pivots, _ = self.rref()
        dense = reduced.to_dense()
        pivot_set = set(pivots)
        free = [j for j in range(self.cols) if j not in pivot_set]
        basis = np.zeros((self.cols, len(free)), dtype=np.uint8)
        for k, f in enumerate(free):
            basis[f, k] = 1
            for i, p in enumerate(pivots):
                basis[p, k] = dense[i, f]
        return Gf2Matrix.from_dense(basis)

    def solve(self, rhs):
        """Solve ``self @ x == rhs`` columnwise.

        Returns the particular solution with free variables zero, or
        ``None`` when the system is inconsistent.
        """
        if rhs.rows != self.rows:
            raise ValidationError("rhs row count mismatch")
        aug = Gf2Matrix.hstack([self, rhs])
        reduced, pivots, _ = aug.rref()
        dense = reduced.to_dense()
        for i, p in enumerate(pivots):
            if p >= self.cols:
                return None
        sol = np.zeros((self.cols, rhs.cols), dtype=np.uint8)
        for i, p in enumerate(pivots):
            sol[p, :] = dense[i, self.cols :]
        return Gf2Matrix.from_dense(sol)


def rank_oracle_minors(mat):
    """Brute-force rank via minor expansion, for cross-checking rref.

    Largest k such that some k x k submatrix has determinant 1 over F2.
    Exponential; intended for matrices up to about 8 x 8.
    """
    from itertools import combinations

    dense = mat.to_dense() if isinstance(mat, Gf2Matrix) else np.asarray(mat) & 1
    m, n = dense.shape

    def det2(sub):
        k = sub.shape[0]
        if k == 0:
            return 1
        if k == 1:
            return int(sub[0, 0])
        total = 0
        for j in range(k):
            if sub[0, j]:
                minor = np.delete(np.delete(sub, 0, axis=0), j, axis=1)
                total ^= det2(minor)
        return total

    for k in range(min(m, n), 0, -1):
        for rows in combinations(range(m), k):
            sub_rows = dense[list(rows), :]
            for cols in combinations(range(n), k):
                if det2(sub_rows[:, list(cols)]):
                    return k
    return 0
