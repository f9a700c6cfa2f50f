"""Finite chain complexes over F2 and deformation retracts onto homology.

A ``GradedKComplex`` stores dimensions and differentials for a finite
integer interval of degrees; maps out of the interval are treated as
zero, so homology at the two extreme degrees is only meaningful when
the complex genuinely vanishes beyond them (window users work with
interior degrees).

``build_contraction`` produces the deformation-retract datum (i, p, h)
onto homology with the strong side conditions h i = 0, p h = 0, h h = 0
imposed.  The splitting is pivot-based and deterministic: repeated runs
on equal inputs give bit-identical matrices.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from .gf2 import Gf2Matrix


class GradedKComplex:
    """Chain complex of F2 vector spaces on degrees lo..hi, d of degree -1."""

    __slots__ = ("lo", "hi", "dims", "d")

    def __init__(self, lo, hi, dims, d, check=True):
        if lo > hi:
            raise ValidationError(f"malformed degree interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi
        self.dims = {n: int(dims.get(n, 0)) for n in range(lo, hi + 1)}
        self.d = {}
        for n in range(lo + 1, hi + 1):
            mat = d.get(n)
            if mat is None:
                mat = Gf2Matrix.zeros(self.dims[n - 1], self.dims[n])
            self.d[n] = mat
        if check:
            issues = self.validate()
            if issues:
                raise ValidationError("invalid complex", issues)

    def validate(self):
        issues = []
        for n in range(self.lo + 1, self.hi + 1):
            mat = self.d[n]
            want = (self.dims[n - 1], self.dims[n])
            if mat.shape != want:
                issues.append(f"d_{n} has shape {mat.shape}, expected {want}")
        if issues:
            return issues
        for n in range(self.lo + 2, self.hi + 1):
            if not (self.d[n - 1] @ self.d[n]).is_zero():
                issues.append(f"d_{n-1} o d_{n} != 0")
        return issues

    def dim(self, n):
        return self.dims.get(n, 0)

    def diff(self, n):
        """d_n : degree n -> degree n-1 (zero outside the stored range)."""
        if n in self.d:
            return self.d[n]
        return Gf2Matrix.zeros(self.dim(n - 1), self.dim(n))

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def euler_characteristic(self):
        return sum((-1) ** n * self.dims[n] for n in self.degrees())

    def __eq__(self, other):
        if not isinstance(other, GradedKComplex):
            return NotImplemented
        return (
            (self.lo, self.hi) == (other.lo, other.hi)
            and self.dims == other.dims
            and all(self.diff(n) == other.diff(n) for n in range(self.lo + 1, self.hi + 1))
        )

    def homology_dims(self):
        """dim H_n for every stored degree (exact on interior degrees)."""
        return {n: self.dim(n) - self.diff(n).rank() - self.diff(n + 1).rank()
                for n in self.degrees()}


def homology_data(cx):
    """Cycle-representative and boundary bases per degree.

    Returns ``{n: (reps, boundaries)}`` where the columns of ``reps`` are
    cycles whose classes form a basis of H_n and the columns of
    ``boundaries`` span im d_{n+1}.
    """
    con = build_contraction(cx)
    out = {}
    for n in cx.degrees():
        d_in = cx.diff(n + 1)
        _, piv_in, _ = d_in.rref()
        boundaries = d_in.take_columns(piv_in)
        out[n] = (con.i[n], boundaries)
    return out


class Contraction:
    """Deformation retract (i, p, h) of ``big`` onto ``small``.

    i and p are degree-0 chain maps, h has degree +1, and the five
    identities p i = 1, 1 - i p = d h + h d, h i = 0, p h = 0, h h = 0
    all hold degreewise as exact matrix equations (see ``verify``).
    """

    __slots__ = ("big", "small", "i", "p", "h")

    def __init__(self, big, small, i, p, h):
        self.big = big
        self.small = small
        self.i = i  # degree n: big.dim(n) x small.dim(n)
        self.p = p  # degree n: small.dim(n) x big.dim(n)
        self.h = h  # degree n: big.dim(n+1) x big.dim(n)

    def imap(self, n):
        return self.i.get(n, Gf2Matrix.zeros(self.big.dim(n), self.small.dim(n)))

    def pmap(self, n):
        return self.p.get(n, Gf2Matrix.zeros(self.small.dim(n), self.big.dim(n)))

    def hmap(self, n):
        return self.h.get(n, Gf2Matrix.zeros(self.big.dim(n + 1), self.big.dim(n)))

    def verify(self):
        """Return a list of identity violations (empty when valid)."""
        bad = []
        big, small = self.big, self.small
        for n in big.degrees():
            i_n, p_n, h_n = self.imap(n), self.pmap(n), self.hmap(n)
            if not (p_n @ i_n) == Gf2Matrix.identity(small.dim(n)):
                bad.append(f"p i != 1 in degree {n}")
            lhs = Gf2Matrix.identity(big.dim(n)) + i_n @ p_n
            rhs = big.diff(n + 1) @ h_n + self.hmap(n - 1) @ big.diff(n)
            if not lhs == rhs:
                bad.append(f"1 - i p != d h + h d in degree {n}")
            if not (h_n @ i_n).is_zero():
                bad.append(f"h i != 0 in degree {n}")
            if not (self.pmap(n + 1) @ h_n).is_zero():
                bad.append(f"p h != 0 in degree {n}")
            if not (self.hmap(n + 1) @ h_n).is_zero():
                bad.append(f"h h != 0 in degree {n}")
            # chain map conditions
            if not (big.diff(n) @ i_n) == (self.imap(n - 1) @ small.diff(n)):
                bad.append(f"d i != i d in degree {n}")
            if not (self.pmap(n - 1) @ big.diff(n)) == (small.diff(n) @ p_n):
                bad.append(f"p d != d p in degree {n}")
        return bad


def build_contraction(cx):
    """Contract a valid complex onto its homology (zero differential).

    Degreewise splitting C_n = B_n + H_n + A_n with B = boundaries,
    d : A_{n} -> B_{n-1} an isomorphism on the pivot coordinates of d_n,
    and H a pivot-greedy complement of B inside the cycles.  Then
    i includes H, p projects onto it, and h inverts d from B back to A.
    """
    issues = cx.validate()
    if issues:
        raise ValidationError("invalid complex", issues)

    # per degree: pivot coordinates of d_n give A_n and preimages of B_{n-1}
    a_coords = {}
    for n in range(cx.lo, cx.hi + 1):
        _, pivots, _ = cx.diff(n).rref()
        a_coords[n] = pivots

    i_maps, p_maps, h_maps = {}, {}, {}
    small_dims = {}
    for n in cx.degrees():
        dim_n = cx.dim(n)
        d_out = cx.diff(n)
        d_in = cx.diff(n + 1)
        piv_in = a_coords[n + 1] if n + 1 <= cx.hi else ()

        boundary_basis = d_in.take_columns(piv_in)  # dim_n x b
        ker = d_out.kernel_basis()  # dim_n x z

        # pivot-greedy complement of boundaries inside cycles
        b = boundary_basis.cols
        stacked = Gf2Matrix.hstack([boundary_basis, ker])
        _, pivots, _ = stacked.rref()
        h_cols = [j - b for j in pivots if j >= b]
        h_basis = ker.take_columns(h_cols)  # dim_n x dim H_n

        a_basis = Gf2Matrix.from_dense(
            np.eye(dim_n, dtype=np.uint8)[:, list(a_coords[n])].reshape(dim_n, len(a_coords[n]))
        )

        u = Gf2Matrix.hstack([boundary_basis, h_basis, a_basis])
        if u.cols != dim_n:
            raise ValidationError(
                f"splitting failed in degree {n}: {u.cols} != {dim_n}"
            )
        coords = u.solve(Gf2Matrix.identity(dim_n))
        if coords is None:
            raise ValidationError(f"splitting not invertible in degree {n}")

        small_dims[n] = h_basis.cols
        i_maps[n] = h_basis
        p_maps[n] = coords.take_rows(range(b, b + h_basis.cols))

        # h on degree n: send the boundary part to its A_{n+1} preimage
        b_coords = coords.take_rows(range(b))  # b x dim_n
        preimage = Gf2Matrix.from_columns(
            [[c] for c in piv_in], cx.dim(n + 1)
        )  # dim_{n+1} x b, unit vectors at pivot coordinates
        h_maps[n] = preimage @ b_coords

    small = GradedKComplex(cx.lo, cx.hi, small_dims, {}, check=False)
    return Contraction(cx, small, i_maps, p_maps, h_maps)


def random_complex(seed, degrees=6, max_dim=12, lo=0):
    """Seeded random valid complex (controlled boundary ranks).

    Differentials are conjugates of fixed rank patterns by random
    invertible matrices, so d^2 = 0 holds by construction.
    """
    rng = np.random.default_rng(seed)
    hi = lo + degrees - 1
    dims = {n: int(rng.integers(1, max_dim + 1)) for n in range(lo, hi + 1)}

    def random_invertible(n):
        if n == 0:
            return Gf2Matrix.zeros(0, 0)
        while True:
            m = Gf2Matrix.from_dense(rng.integers(0, 2, size=(n, n), dtype=np.uint8))
            if m.rank() == n:
                return m

    x = {n: random_invertible(dims[n]) for n in range(lo, hi + 1)}
    x_inv = {}
    for n, m in x.items():
        inv = m.solve(Gf2Matrix.identity(dims[n]))
        x_inv[n] = inv

    ranks = {}
    prev = 0
    for n in range(lo + 1, hi + 1):
        cap = max(0, min(dims[n], dims[n - 1] - prev))
        ranks[n] = int(rng.integers(0, cap + 1)) if cap else 0
        prev = ranks[n]

    d = {}
    for n in range(lo + 1, hi + 1):
        pattern = np.zeros((dims[n - 1], dims[n]), dtype=np.uint8)
        r = ranks[n]
        # image lands in the last r coordinates, kernel excludes the first r
        for k in range(r):
            pattern[dims[n - 1] - r + k, k] = 1
        d[n] = x[n - 1] @ Gf2Matrix.from_dense(pattern) @ x_inv[n]
    return GradedKComplex(lo, hi, dims, d)
