"""Graded rings over F2: S = F2[x1..xr] with deg x_i = -1, the exterior
algebra / group algebra of (Z/2)^r, and the basis changes between them.

Monomials are plain exponent tuples of length r.  A ``GradedPoly`` is a
set of monomials (coefficients are 1 over F2, addition is symmetric
difference).  The same container represents elements of the dual
coalgebra S_c under the monomial dual basis; only the operations differ
(``sigma`` versus multiplication), which avoids a divided-power type.

Degrees are signed: S lives in degrees <= 0 (a monomial of exponent sum
e has degree -e), the dual basis element of that monomial has degree +e.
"""

from __future__ import annotations

import re
from itertools import combinations_with_replacement

from .errors import ValidationError


# -- monomials (exponent tuples) -------------------------------------------

def mono_one(r):
    return (0,) * r

def mono_total(m):
    return sum(m)

def mono_degree(m):
    return -sum(m)

def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))

def mono_divides(a, b):
    """True when a | b."""
    return all(x <= y for x, y in zip(a, b))

def mono_div(b, a):
    return tuple(y - x for x, y in zip(a, b))

def mono_var(r, i):
    """The variable x_i (1-indexed)."""
    return tuple(1 if j == i - 1 else 0 for j in range(r))


def monomials_of_total(r, total):
    """All exponent tuples in r variables with the given exponent sum."""
    if total < 0:
        return []
    if r == 0:
        return [()] if total == 0 else []
    out = []
    for bars in combinations_with_replacement(range(r), total):
        exps = [0] * r
        for b in bars:
            exps[b] += 1
        out.append(tuple(exps))
    return sorted(out)


def mono_render(m):
    if not any(m):
        return "1"
    parts = []
    for i, e in enumerate(m, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


_MONO_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


class GradedPoly:
    """Element of S (or of S_c in the dual basis): a set of monomials."""

    __slots__ = ("r", "terms")

    def __init__(self, r, terms=()):
        self.r = r
        self.terms = frozenset(terms)
        for m in self.terms:
            if len(m) != r:
                raise ValidationError(f"monomial {m} has wrong arity for r={r}")

    @classmethod
    def zero(cls, r):
        return cls(r)

    @classmethod
    def one(cls, r):
        return cls(r, [mono_one(r)])

    @classmethod
    def var(cls, r, i):
        return cls(r, [mono_var(r, i)])

    def is_zero(self):
        return not self.terms

    def is_homogeneous(self):
        totals = {mono_total(m) for m in self.terms}
        return len(totals) <= 1

    def total_degree(self):
        """Common exponent sum of the terms (None for 0, error if mixed)."""
        totals = {mono_total(m) for m in self.terms}
        if not totals:
            return None
        if len(totals) > 1:
            raise ValidationError(f"inhomogeneous polynomial {self}")
        return totals.pop()

    def constant_term(self):
        return 1 if mono_one(self.r) in self.terms else 0

    def __add__(self, other):
        self._check(other)
        return GradedPoly(self.r, self.terms ^ other.terms)

    def __mul__(self, other):
        self._check(other)
        acc = set()
        for a in self.terms:
            for b in other.terms:
                acc ^= {mono_mul(a, b)}
        return GradedPoly(self.r, acc)

    def scale(self, m):
        """Multiply by a single monomial."""
        return GradedPoly(self.r, {mono_mul(a, m) for a in self.terms})

    def _check(self, other):
        if not isinstance(other, GradedPoly) or other.r != self.r:
            raise ValidationError("rank mismatch in polynomial arithmetic")

    def __eq__(self, other):
        return isinstance(other, GradedPoly) and self.r == other.r and self.terms == other.terms

    def __hash__(self):
        return hash((self.r, self.terms))

    def __repr__(self):
        return f"GradedPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        ordered = sorted(self.terms, key=lambda m: (mono_total(m), m))
        return " + ".join(mono_render(m) for m in ordered)


def poly_parse(text, r):
    """Parse the text syntax: "x1^2*x3 + x2", "1", "0"."""
    text = text.strip()
    if text == "0":
        return GradedPoly.zero(r)
    terms = set()
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ValidationError(f"empty summand in {text!r}")
        exps = [0] * r
        if chunk != "1":
            for factor in chunk.split("*"):
                factor = factor.strip()
                got = _MONO_FACTOR.match(factor)
                if not got:
                    raise ValidationError(f"bad monomial factor {factor!r}")
                idx = int(got.group(1))
                if not 1 <= idx <= r:
                    raise ValidationError(f"variable x{idx} out of range for r={r}")
                exps[idx - 1] += int(got.group(2) or 1)
        terms ^= {tuple(exps)}
    return GradedPoly(r, terms)


def sigma(i, phi):
    """Dual of multiplication by x_i on S_c.

    On the dual basis element of a monomial m: the dual of m / x_i when
    x_i divides m, else 0; extended additively.
    """
    if not 1 <= i <= phi.r:
        raise ValidationError(f"index {i} out of range for r={phi.r}")
    v = mono_var(phi.r, i)
    return GradedPoly(phi.r, {mono_div(m, v) for m in phi.terms if mono_divides(v, m)})


# -- exterior algebra / group algebra ----------------------------------------

class ExtElement:
    """Element of the exterior algebra on t_1..t_r: a set of index subsets.

    t(I) t(J) = t(I u J) when I and J are disjoint, else 0 (t_i^2 = 0).
    """

    __slots__ = ("r", "terms")

    def __init__(self, r, terms=()):
        self.r = r
        self.terms = frozenset(frozenset(t) for t in terms)
        for t in self.terms:
            if any(not 1 <= i <= r for i in t):
                raise ValidationError(f"index set {set(t)} out of range for r={r}")

    @classmethod
    def zero(cls, r):
        return cls(r)

    @classmethod
    def one(cls, r):
        return cls(r, [frozenset()])

    @classmethod
    def t(cls, r, indices):
        return cls(r, [frozenset(indices)])

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        self._check(other)
        return ExtElement(self.r, self.terms ^ other.terms)

    def __mul__(self, other):
        self._check(other)
        acc = set()
        for a in self.terms:
            for b in other.terms:
                if not (a & b):
                    acc ^= {a | b}
        return ExtElement(self.r, acc)

    def _check(self, other):
        if not isinstance(other, ExtElement) or other.r != self.r:
            raise ValidationError("rank mismatch in exterior arithmetic")

    def __eq__(self, other):
        return isinstance(other, ExtElement) and self.r == other.r and self.terms == other.terms

    def __hash__(self):
        return hash((self.r, self.terms))

    def __repr__(self):
        return f"ExtElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        ordered = sorted(self.terms, key=lambda t: (len(t), sorted(t)))
        return "+".join(render_t(t) for t in ordered)


def render_t(indices):
    if not indices:
        return "1"
    return "t{" + ",".join(str(i) for i in sorted(indices)) + "}"


_T_TERM = re.compile(r"^t\{([\d,\s]*)\}$")


def ext_parse(text, r):
    """Parse "t{1,3}+1", "t{2}", "1", "0"."""
    text = text.strip()
    if text == "0":
        return ExtElement.zero(r)
    terms = set()
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if chunk == "1":
            terms ^= {frozenset()}
            continue
        got = _T_TERM.match(chunk)
        if not got:
            raise ValidationError(f"bad exterior term {chunk!r}")
        body = got.group(1).strip()
        idx = frozenset(int(s) for s in body.split(",") if s.strip()) if body else frozenset()
        if any(not 1 <= i <= r for i in idx):
            raise ValidationError(f"index out of range in {chunk!r} for r={r}")
        terms ^= {idx}
    return ExtElement(r, terms)


def group_to_t_basis(r, elements):
    """Convert a sum of group elements of (Z/2)^r to the t-basis.

    ``elements`` is an iterable of index subsets J encoding prod_{j in J}
    g_j; each g_j = 1 + t_j, so g(J) expands to the sum of t(I) over
    I subset of J.
    """
    out = ExtElement.zero(r)
    for j_set in elements:
        j_set = frozenset(j_set)
        subsets = [frozenset()]
        for j in sorted(j_set):
            subsets = subsets + [s | {j} for s in subsets]
        out = out + ExtElement(r, subsets)
    return out


def t_to_group_basis(elt):
    """Inverse of ``group_to_t_basis``: returns a frozenset of subsets J.

    Uses t(I) = prod_{i in I}(1 + g_i) = sum of g(J) over J subset of I,
    an involution-pair with the forward transform in characteristic 2.
    """
    acc = set()
    for i_set in elt.terms:
        subsets = [frozenset()]
        for i in sorted(i_set):
            subsets = subsets + [s | {i} for s in subsets]
        acc ^= set(subsets)
    return frozenset(acc)


def lambda_action_matrices(r, perms):
    """Matrices of t_i = 1 + g_i for a basis permutation action.

    ``perms[i][k]`` is the image index of basis vector k under g_{i+1}.
    Each permutation must be an involution and they must commute (an
    action of (Z/2)^r); fixed points are allowed here, freeness is a
    separate certificate.
    """
    from .gf2 import Gf2Matrix

    if len(perms) != r:
        raise ValidationError(f"expected {r} permutations, got {len(perms)}")
    n = len(perms[0]) if perms else 0
    for gi, perm in enumerate(perms, start=1):
        if sorted(perm) != list(range(n)):
            raise ValidationError(f"g{gi} is not a permutation of the basis")
        if any(perm[perm[k]] != k for k in range(n)):
            raise ValidationError(f"g{gi} is not an involution")
    for a in range(r):
        for b in range(a + 1, r):
            if any(perms[a][perms[b][k]] != perms[b][perms[a][k]] for k in range(n)):
                raise ValidationError(f"g{a+1} and g{b+1} do not commute")
    mats = []
    ident = Gf2Matrix.identity(n)
    for perm in perms:
        p = Gf2Matrix.from_columns([[perm[k]] for k in range(n)], n)
        mats.append(ident + p)
    return mats
