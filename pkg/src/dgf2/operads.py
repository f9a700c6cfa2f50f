"""Planar-tree operad calculus: the free operad on unary generators
t_1..t_r and a binary mu, its rewriting to path-sequence normal forms,
the 2^{rn} monomial basis, composition, a restricted-basis certificate,
and weight-graded bar homology.

Trees are nested tuples with the root at the bottom:

    ("leaf",)              an input
    ("t", i, child)        unary node labeled t_i
    ("mu", left, right)    binary node

Leaves are numbered left to right.  Normal forms are combs nested in
the second mu-slot with a strictly ascending (root to leaf) t-chain
over each leaf, i.e. the path sequences

    (mu t(I_1), mu^2 t(I_2), ..., mu^{n-1} t(I_{n-1}), mu^{n-1} t(I_n)).

Rewriting rules (each strictly increases the certificate order):

    t_i o t_i            -> 0
    t_i o t_j  (i > j)   -> t_j o t_i
    t_i below mu         -> mu with t_i over both inputs
    mu o_1 mu            -> mu o_2 mu
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product

from .errors import ValidationError
from .gf2 import Gf2Matrix
from .complexes import GradedKComplex
from .polyalg import render_t

LEAF = ("leaf",)

ALL_RULES = frozenset({"tt", "bv", "assoc"})


# -- basic tree ops ------------------------------------------------------------

def arity(tree):
    if tree == LEAF:
        return 1
    if tree[0] == "t":
        return arity(tree[2])
    return arity(tree[1]) + arity(tree[2])


def weight(tree):
    if tree == LEAF:
        return 0
    if tree[0] == "t":
        return 1 + weight(tree[2])
    return 1 + weight(tree[1]) + weight(tree[2])


def graft(outer, leaf_index, inner):
    """Replace the leaf_index-th leaf (0-based, left to right) of outer."""
    n = arity(outer)
    if not 0 <= leaf_index < n:
        raise ValidationError(f"leaf index {leaf_index} out of range for arity {n}")

    def go(t, k):
        # returns (new_tree, leaves_consumed)
        if t == LEAF:
            return (inner, 1) if k == 0 else (t, 1)
        if t[0] == "t":
            sub, used = go(t[2], k)
            return ("t", t[1], sub), used
        left, used_l = go(t[1], k)
        right, used_r = go(t[2], k - used_l)
        return ("mu", left, right), used_l + used_r

    new_tree, _ = go(outer, leaf_index)
    return new_tree


def enumerate_free(r, w, n):
    """All planar trees over {t_1..t_r, mu} with the given weight and arity.

    Desk-scale only; for the mu-only shapes the arity-(w+1), weight-w
    count is the w-th Catalan number.
    """
    if w > 6 or n > 5:
        raise ValidationError(f"enumeration bounds exceeded: weight {w}, arity {n}")
    return _enumerate(r, w, n)


def _enumerate(r, w, n):
    @lru_cache(maxsize=None)
    def trees(a, wt):
        out = []
        if a == 1 and wt == 0:
            out.append(LEAF)
        if wt >= 1:
            for i in range(1, r + 1):
                for sub in trees(a, wt - 1):
                    out.append(("t", i, sub))
            if a >= 2:
                for a1 in range(1, a):
                    for w1 in range(0, wt):
                        for left in trees(a1, w1):
                            for right in trees(a - a1, wt - 1 - w1):
                                out.append(("mu", left, right))
        return out

    return trees(n, w)


# -- path sequences -----------------------------------------------------------

class PathSequence:
    """Normal-form basis element: one t-index set per leaf.

    The mu-part is determined by the comb shape: leaf i carries mu^{i}
    for i < n and mu^{n-1} for the last two leaves (n >= 2); a single
    leaf carries no mu.
    """

    __slots__ = ("n", "sets")

    def __init__(self, n, sets):
        self.n = int(n)
        self.sets = tuple(frozenset(s) for s in sets)
        if len(self.sets) != self.n or self.n < 1:
            raise ValidationError("path sequence needs one index set per leaf")

    @property
    def arity(self):
        return self.n

    @property
    def weight(self):
        mu_part = self.n - 1
        return mu_part + sum(len(s) for s in self.sets)

    def mu_count(self, i):
        """Number of mu letters on the path of leaf i (0-based)."""
        if self.n == 1:
            return 0
        return min(i + 1, self.n - 1)

    def is_identity(self):
        return self.n == 1 and not self.sets[0]

    def __eq__(self, other):
        return isinstance(other, PathSequence) and self.n == other.n and self.sets == other.sets

    def __hash__(self):
        return hash((self.n, self.sets))

    def sort_key(self):
        """Display order: tuple of leaf-set bitmasks, leaf 1 most
        significant."""
        return (self.n, tuple(sum(1 << (i - 1) for i in s) for s in self.sets))

    def __repr__(self):
        return f"PathSequence({self})"

    def __str__(self):
        parts = []
        for i, s in enumerate(self.sets):
            m = self.mu_count(i)
            if m == 0:
                word = render_t(s)
            else:
                word = "mu" if m == 1 else f"mu^{m}"
                if s:
                    word += " " + render_t(s)
            parts.append(word)
        return "(" + ", ".join(parts) + ")"

    def to_tree(self):
        def chain(s, tip):
            t = tip
            for i in sorted(s, reverse=True):
                t = ("t", i, t)  # ascending root-to-leaf
            return t

        if self.n == 1:
            return chain(self.sets[0], LEAF)
        t = ("mu", chain(self.sets[-2], LEAF), chain(self.sets[-1], LEAF))
        for i in range(self.n - 3, -1, -1):
            t = ("mu", chain(self.sets[i], LEAF), t)
        return t


def identity_ps(r=None):
    return PathSequence(1, [frozenset()])


def is_normal(tree):
    return _find_redexes(tree) == []


def tree_to_pathseq(tree):
    """Convert an irreducible tree to its path sequence."""

    def walk(t, ts):
        if t == LEAF:
            return [frozenset(ts)]
        if t[0] == "t":
            return walk(t[2], ts | {t[1]})
        if ts:
            raise ValidationError("tree is not in normal form (t below mu)")
        return walk(t[1], frozenset()) + walk(t[2], frozenset())

    sets = walk(tree, frozenset())
    ps = PathSequence(len(sets), sets)
    if ps.to_tree() != tree:
        raise ValidationError("tree is not in normal form")
    return ps


# -- rewriting -----------------------------------------------------------------

def _find_redexes(tree, rules=ALL_RULES, path=()):
    """All redex positions, outermost-leftmost first: (path, kind)."""
    out = []
    if tree == LEAF:
        return out
    if tree[0] == "t":
        child = tree[2]
        if child != LEAF and child[0] == "t" and "tt" in rules:
            if tree[1] >= child[1]:
                out.append((path, "tt"))
        if child != LEAF and child[0] == "mu" and "bv" in rules:
            out.append((path, "bv"))
        out.extend(_find_redexes(tree[2], rules, path + (0,)))
        return out
    # mu node
    if tree[1] != LEAF and tree[1][0] == "mu" and "assoc" in rules:
        out.append((path, "assoc"))
    out.extend(_find_redexes(tree[1], rules, path + (0,)))
    out.extend(_find_redexes(tree[2], rules, path + (1,)))
    return out


def _rewrite_at(tree, path, kind):
    """Apply one rule; returns the new tree or None for the zero result."""
    if path:
        k = path[0]
        if tree[0] == "t":
            sub = _rewrite_at(tree[2], path[1:], kind)
            return None if sub is None else ("t", tree[1], sub)
        if k == 0:
            sub = _rewrite_at(tree[1], path[1:], kind)
            return None if sub is None else ("mu", sub, tree[2])
        sub = _rewrite_at(tree[2], path[1:], kind)
        return None if sub is None else ("mu", tree[1], sub)
    if kind == "tt":
        i, child = tree[1], tree[2]
        j = child[1]
        if i == j:
            return None
        return ("t", j, ("t", i, child[2]))
    if kind == "bv":
        i, child = tree[1], tree[2]
        return ("mu", ("t", i, child[1]), ("t", i, child[2]))
    # assoc: mu(mu(a, b), c) -> mu(a, mu(b, c))
    inner = tree[1]
    return ("mu", inner[1], ("mu", inner[2], tree[2]))


def rewrite_fully(tree, rules=ALL_RULES, strategy="first", rng=None, max_steps=100000):
    """Rewrite to a fixed point; returns the final tree or None (zero)."""
    if strategy == "random" and rng is None:
        rng = random.Random(0)
    current = tree
    for _ in range(max_steps):
        redexes = _find_redexes(current, rules)
        if not redexes:
            return current
        path, kind = redexes[0] if strategy == "first" else rng.choice(redexes)
        current = _rewrite_at(current, path, kind)
        if current is None:
            return None
    raise ValidationError("rewriting did not terminate (rule bug)")


def normal_form(tree, strategy="first", rng=None):
    """Normal form of a free-operad tree as an F2 sum of path sequences.

    The rules are monomial (each step yields one term or zero), so the
    result has at most one element.
    """
    final = rewrite_fully(tree, ALL_RULES, strategy, rng)
    if final is None:
        return frozenset()
    return frozenset({tree_to_pathseq(final)})


# -- the monomial basis ----------------------------------------------------------

def wtilde_basis(n, r):
    """The 2^{rn} path sequences of arity n, in display order."""
    if n < 1 or r < 1:
        raise ValidationError("need n >= 1 and r >= 1")
    if n * r > 16:
        raise ValidationError(f"basis bounds exceeded: n*r = {n * r}")
    out = []
    for masks in product(range(1 << r), repeat=n):
        sets = [frozenset(i + 1 for i in range(r) if m >> i & 1) for m in masks]
        out.append(PathSequence(n, sets))
    out.sort(key=PathSequence.sort_key)
    return out


def wtilde_compose(a, slot, b):
    """Partial composition of path sequences (0-based slot), normal form.

    Closed form: graft b's comb into slot s and push a's t-chain t(I_s)
    onto every leaf of b; the result is zero when an index collides.
    """
    if not 0 <= slot < a.arity:
        raise ValidationError(f"slot {slot} out of range for arity {a.arity}")
    overlay = a.sets[slot]
    new_mid = []
    for j_set in b.sets:
        if j_set & overlay:
            return frozenset()
        new_mid.append(j_set | overlay)
    sets = list(a.sets[:slot]) + new_mid + list(a.sets[slot + 1:])
    return frozenset({PathSequence(a.arity + b.arity - 1, sets)})


def compose_via_trees(a, slot, b):
    """Oracle route: graft the underlying trees, then rewrite.

    Slots of a path sequence are its leaves in order, so the slot index
    is the leaf index.
    """
    return normal_form(graft(a.to_tree(), slot, b.to_tree()))


# -- certificate order ------------------------------------------------------------

def leaf_words(tree, r):
    """Leaf-to-root letter words, one per leaf; t_i -> i, mu -> r+1."""

    def walk(t, acc):
        if t == LEAF:
            return [tuple(reversed(acc))]
        if t[0] == "t":
            return walk(t[2], acc + [t[1]])
        down = acc + [r + 1]
        return walk(t[1], down) + walk(t[2], down)

    return walk(tree, [])


def cert_key(tree, r):
    """Graded path-lex key: weight first, then leaf words left to right,
    letters t_1 < ... < t_r < mu, a shorter word larger on prefix ties."""
    sentinel = r + 2
    words = tuple(w + (sentinel,) for w in leaf_words(tree, r))
    return (weight(tree), words)


def pbw_certificate(n, r, rules=ALL_RULES):
    """Restricted-basis check at size n: composites of basis elements
    (arities up to n) rewrite to basis elements that are >= the
    composite in the certificate order, and basis elements are
    irreducible.  Returns a report dict with any failures listed.
    """
    if n * r > 9:
        raise ValidationError(f"certificate bounds exceeded: n*r = {n * r}")
    basis = []
    for k in range(1, n + 1):
        basis.extend(wtilde_basis(k, r))
    basis_set = set(basis)
    failures = []
    reducible = []
    for ps in basis:
        if not is_normal(ps.to_tree()):
            reducible.append(str(ps))
    pairs = 0
    for a in basis:
        for b in basis:
            for slot in range(a.arity):
                pairs += 1
                composite = graft(a.to_tree(), slot, b.to_tree())
                key = cert_key(composite, r)
                final = rewrite_fully(composite, rules)
                if final is None:
                    continue
                if not is_normal(final):
                    failures.append(
                        f"{a} o_{slot} {b}: rewriting stuck at a non-basis tree"
                    )
                    continue
                ps = tree_to_pathseq(final)
                if ps.arity <= n and ps not in basis_set:
                    failures.append(f"{a} o_{slot} {b}: normal form {ps} not in basis")
                if cert_key(final, r) < key:
                    failures.append(
                        f"{a} o_{slot} {b}: normal form below the composite in order"
                    )
    return {
        "n": n,
        "r": r,
        "pairs_checked": pairs,
        "failures": failures,
        "irreducibility_failures": reducible,
        "ok": not failures and not reducible,
    }


def basis_crosscheck(n, r, max_weight=None):
    """Compare the closed-form basis with rewriting irreducibles.

    Enumerates every arity-n tree up to ``max_weight`` (default: the
    maximal basis weight n-1+rn) and collects the irreducible ones.  On
    disagreement both sets are reported rather than guessing.
    """
    full = n - 1 + r * n
    cap = full if max_weight is None else min(max_weight, full)
    irreducible = set()
    for w in range(0, cap + 1):
        for tree in _enumerate(r, w, n):
            if is_normal(tree):
                irreducible.add(tree_to_pathseq(tree))
    expected = {ps for ps in wtilde_basis(n, r) if ps.weight <= cap}
    return {
        "agree": irreducible == expected,
        "only_rewriting": sorted(map(str, irreducible - expected)),
        "only_closed_form": sorted(map(str, expected - irreducible)),
        "count": len(irreducible),
        "weight_cap": cap,
    }


# -- operad tables for the bar construction -----------------------------------------

class OperadTable:
    """Weight-graded operad data: reduced basis per arity + composition."""

    name = "abstract"

    def reduced_basis(self, arity):
        raise NotImplementedError

    def weight(self, el):
        raise NotImplementedError

    def compose(self, a, slot, b):
        """0-based slot; returns an iterable of basis elements (F2 sum)."""
        raise NotImplementedError


class AssociativeTable(OperadTable):
    """The associative operad: one basis corolla per arity >= 2."""

    name = "as"

    def reduced_basis(self, arity):
        return [("as", arity)] if arity >= 2 else []

    def weight(self, el):
        return el[1] - 1

    def compose(self, a, slot, b):
        return [("as", a[1] + b[1] - 1)]


class ExteriorTable(OperadTable):
    """The exterior algebra as a unary operad, t(I) basis."""

    name = "lambda"

    def __init__(self, r):
        self.r = r

    def reduced_basis(self, arity):
        if arity != 1:
            return []
        out = []
        for mask in range(1, 1 << self.r):
            out.append(("lam", tuple(sorted(i + 1 for i in range(self.r) if mask >> i & 1))))
        return out

    def weight(self, el):
        return len(el[1])

    def compose(self, a, slot, b):
        sa, sb = set(a[1]), set(b[1])
        if sa & sb:
            return []
        return [("lam", tuple(sorted(sa | sb)))]


class WtildeTable(OperadTable):
    """The Boardman-Vogt style operad on t's and mu, path-sequence basis."""

    name = "wtilde"

    def __init__(self, r, max_arity=6):
        self.r = r
        self.max_arity = max_arity

    def _encode(self, ps):
        return ("w", ps.n, tuple(tuple(sorted(s)) for s in ps.sets))

    def _decode(self, el):
        return PathSequence(el[1], [frozenset(s) for s in el[2]])

    def reduced_basis(self, arity):
        if arity > self.max_arity:
            raise ValidationError("arity beyond table bound")
        return [
            self._encode(ps)
            for ps in wtilde_basis(arity, self.r)
            if ps.weight >= 1
        ]

    def weight(self, el):
        return self._decode(el).weight

    def compose(self, a, slot, b):
        out = wtilde_compose(self._decode(a), slot, self._decode(b))
        return [self._encode(ps) for ps in out]


# -- bar construction ----------------------------------------------------------------

BLEAF = ("bleaf",)


def _compositions(total, parts):
    if parts == 1:
        return [(total,)] if total >= 1 else []
    out = []
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def _weak_compositions(total, parts):
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(0, total + 1):
        for rest in _weak_compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def _bar_trees(table, a, w, memo):
    """Planar trees with nodes labeled by reduced basis elements, total
    arity a and total weight w."""
    key = (a, w)
    if key in memo:
        return memo[key]
    out = []
    if w >= 1:
        for m in range(1, a + 1):
            for label in table.reduced_basis(m):
                u = table.weight(label)
                if u > w:
                    continue
                for arities in _compositions(a, m):
                    for weights in _weak_compositions(w - u, m):
                        options = []
                        ok = True
                        for aj, wj in zip(arities, weights):
                            if wj == 0:
                                if aj == 1:
                                    options.append([BLEAF])
                                else:
                                    ok = False
                                    break
                            else:
                                subs = _bar_trees(table, aj, wj, memo)
                                if not subs:
                                    ok = False
                                    break
                                options.append(subs)
                        if not ok:
                            continue
                        for combo in product(*options):
                            out.append(("bnode", label, tuple(combo)))
    out = sorted(set(out))
    memo[key] = out
    return out


def _node_count(tree):
    if tree == BLEAF:
        return 0
    return 1 + sum(_node_count(c) for c in tree[2])


def _d2_terms(table, tree):
    """All single-edge contractions (with multiplicity; parity later).

    Only weight-preserving compositions are kept: composition is weight
    non-decreasing on a PBW basis, so this is the associated-graded
    differential of the weight filtration, and it squares to zero.  For
    operads with weight-additive composition (the associative and
    exterior cases, and every unary part) nothing is dropped.
    """
    label, children = tree[1], tree[2]
    out = []
    for s, child in enumerate(children):
        if child == BLEAF:
            continue
        budget = table.weight(label) + table.weight(child[1])
        for lab in table.compose(label, s, child[1]):
            if table.weight(lab) == budget:
                out.append(("bnode", lab, children[:s] + child[2] + children[s + 1:]))
        for sub in _d2_terms(table, child):
            out.append(("bnode", label, children[:s] + (sub,) + children[s + 1:]))
    return out


class BarHomology:
    """Weight/arity cell of the operadic bar construction."""

    __slots__ = ("weight", "arity", "complex", "basis_by_degree", "dims")

    def __init__(self, weight_, arity_, cx, basis_by_degree):
        self.weight = weight_
        self.arity = arity_
        self.complex = cx
        self.basis_by_degree = basis_by_degree
        self.dims = cx.homology_dims()

    def koszul_dim(self):
        """dim H_w in homological degree w = the weight grade."""
        return self.dims.get(self.weight, 0)


def bar_homology(table, w, a):
    """Homology of the weight-w, arity-a bar cell of the given operad.

    The differential contracts one internal edge at a time, composing
    the two labels; d^2 = 0 is verified on construction (a failure
    signals a composition bug).
    """
    if w > 4 or a > 4:
        raise ValidationError(f"bar bounds exceeded: weight {w}, arity {a}")
    memo = {}
    trees = _bar_trees(table, a, w, memo)
    by_degree = {}
    for t in trees:
        by_degree.setdefault(_node_count(t), []).append(t)
    hi = w
    dims = {k: len(by_degree.get(k, [])) for k in range(0, hi + 1)}
    index = {k: {t: j for j, t in enumerate(by_degree.get(k, []))} for k in dims}
    dmats = {}
    for k in range(1, hi + 1):
        cols = []
        for t in by_degree.get(k, []):
            hits = {}
            for term in _d2_terms(table, t):
                j = index[k - 1].get(term)
                if j is None:
                    raise ValidationError("edge contraction left the cell basis")
                hits[j] = hits.get(j, 0) ^ 1
            cols.append([j for j, v in hits.items() if v])
        dmats[k] = Gf2Matrix.from_columns(cols, dims[k - 1])
    try:
        cx = GradedKComplex(0, hi, dims, dmats)
    except ValidationError as exc:
        raise ValidationError("bar differential does not square to zero", exc.issues)
    return BarHomology(w, a, cx, by_degree)
