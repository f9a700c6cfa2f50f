"""Differential graded modules: semifree over S = F2[x1..xr] and finite
dimensional over the group algebra of (Z/2)^r.

Degree conventions (used consistently across the package):

* variables x_i have degree -1, so a monomial with exponent sum e sits
  in degree -e and S is concentrated in degrees <= 0;
* differentials have degree -1, hence a nonzero entry (a, b) of an
  S-matrix differential (coefficient of gen_a in d gen_b) is homogeneous
  of exponent sum  deg(gen_a) - deg(gen_b) + 1  and is forced to vanish
  when that number is negative;
* group-algebra elements t_i = 1 + g_i act with degree 0.

All homology is computed degreewise through finite windows; a window
[lo, hi] is exact on lo+1 .. hi-1 and the margin check requires the two
extreme computable degrees to vanish (a heuristic certificate that the
homology is finite dimensional).
"""

from __future__ import annotations

import json

from .complexes import GradedKComplex, build_contraction
from .errors import ValidationError, WindowError
from .gf2 import Gf2Matrix
from .polyalg import (
    GradedPoly,
    ext_parse,
    mono_mul,
    mono_var,
    monomials_of_total,
    poly_parse,
)


class DgSModule:
    """Semifree dg-S-module of finite rank, differential as an S-matrix.

    ``diff[a][b]`` is the coefficient of ``gens[a]`` in the differential
    of ``gens[b]``.
    """

    __slots__ = ("r", "gens", "diff")

    def __init__(self, r, gens, diff):
        self.r = r
        self.gens = [(str(name), int(deg)) for name, deg in gens]
        m = len(self.gens)
        if len(diff) != m or any(len(row) != m for row in diff):
            raise ValidationError(f"differential must be {m}x{m}")
        self.diff = [[entry for entry in row] for row in diff]

    @property
    def rank(self):
        return len(self.gens)

    def validate(self):
        """Structural report: list of issues, empty iff valid. Never raises."""
        issues = []
        m = self.rank
        for a in range(m):
            for b in range(m):
                entry = self.diff[a][b]
                if entry.is_zero():
                    continue
                want = self.gens[a][1] - self.gens[b][1] + 1
                if not entry.is_homogeneous():
                    issues.append(f"entry ({a},{b}) is inhomogeneous: {entry}")
                elif entry.total_degree() != want:
                    issues.append(
                        f"entry ({a},{b}) = {entry} has exponent sum "
                        f"{entry.total_degree()}, expected {want}"
                    )
        for a in range(m):
            for b in range(m):
                acc = GradedPoly.zero(self.r)
                for c in range(m):
                    acc = acc + self.diff[a][c] * self.diff[c][b]
                if not acc.is_zero():
                    issues.append(f"d^2 entry ({a},{b}) = {acc}")
        return issues

    def require_valid(self):
        issues = self.validate()
        if issues:
            raise ValidationError("invalid dg-S-module", issues)

    # -- window expansion -------------------------------------------------

    def expand_in_window(self, lo, hi):
        """Finite-dimensional degreewise slice as a chain complex.

        The degree-n slot has one basis vector per (generator, monomial)
        pair with deg(gen) - exponent sum = n.
        """
        if lo > hi:
            raise WindowError(f"malformed window [{lo}, {hi}]")
        slots = {}
        index = {}
        for n in range(lo, hi + 1):
            basis = []
            for a, (_, deg) in enumerate(self.gens):
                for mono in monomials_of_total(self.r, deg - n):
                    basis.append((a, mono))
            slots[n] = basis
            index[n] = {key: k for k, key in enumerate(basis)}
        dims = {n: len(slots[n]) for n in slots}
        d = {}
        for n in range(lo + 1, hi + 1):
            cols = []
            for (b, mono) in slots[n]:
                col = []
                for a in range(self.rank):
                    entry = self.diff[a][b]
                    for term in entry.terms:
                        key = (a, mono_mul(mono, term))
                        k = index[n - 1].get(key)
                        if k is not None:
                            col.append(k)
                cols.append(col)
            mat = Gf2Matrix.from_columns(cols, dims[n - 1])
            d[n] = mat
        cx = GradedKComplex(lo, hi, dims, d)
        return SWindow(self, cx, slots, index)

    # -- serialization ------------------------------------------------------

    def to_json_dict(self):
        return {
            "r": self.r,
            "generators": [{"name": n, "degree": d} for n, d in self.gens],
            "differential": [[str(e) for e in row] for row in self.diff],
        }

    def to_json(self):
        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_json_dict(cls, data):
        r = int(data["r"])
        gens = [(g["name"], int(g["degree"])) for g in data["generators"]]
        diff = [[poly_parse(e, r) for e in row] for row in data["differential"]]
        return cls(r, gens, diff)

    @classmethod
    def from_json(cls, text):
        return cls.from_json_dict(json.loads(text))


class SWindow:
    """Expanded window of a DgSModule: complex plus slot labels."""

    __slots__ = ("module", "complex", "slots", "index")

    def __init__(self, module, cx, slots, index):
        self.module = module
        self.complex = cx
        self.slots = slots
        self.index = index

    def variable_map(self, i, n):
        """Multiplication by x_i as a slot matrix, degree n -> n-1."""
        v = mono_var(self.module.r, i)
        cols = []
        for (a, mono) in self.slots[n]:
            k = self.index[n - 1].get((a, mono_mul(mono, v)))
            cols.append([k] if k is not None else [])
        return Gf2Matrix.from_columns(cols, self.complex.dim(n - 1))


class HomologyModule:
    """Homology with its induced module structure.

    ``actions[i-1][n]`` is the matrix of x_i : H_n -> H_{n-1} (kind "s")
    or of t_i : H_n -> H_n (kind "lambda") on the chosen representatives.
    """

    __slots__ = ("kind", "r", "lo", "hi", "dims", "actions", "reps")

    def __init__(self, kind, r, lo, hi, dims, actions, reps=None):
        self.kind = kind
        self.r = r
        self.lo = lo
        self.hi = hi
        self.dims = {n: int(dims.get(n, 0)) for n in range(lo, hi + 1)}
        self.actions = actions
        self.reps = reps or {}

    def dim(self, n):
        return self.dims.get(n, 0)

    def total_dim(self):
        return sum(self.dims.values())

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def action(self, i, n):
        target = n - 1 if self.kind == "s" else n
        return self.actions[i - 1].get(
            n, Gf2Matrix.zeros(self.dim(target), self.dim(n))
        )

    def input_diff(self, n):
        """Homology carries the zero differential."""
        return None

    def nonzero_degrees(self):
        return [n for n in self.degrees() if self.dims[n]]

    def parity_class(self):
        """"even", "odd", "mixed", or "zero"."""
        nz = self.nonzero_degrees()
        if not nz:
            return "zero"
        parities = {n & 1 for n in nz}
        if len(parities) == 2:
            return "mixed"
        return "odd" if parities.pop() else "even"


def homology_of_s_module(module, lo, hi):
    """Windowed homology of a valid DgSModule with induced x_i actions.

    Raises WindowError when homology fails to vanish at a margin degree
    (the window is too small to certify finite-dimensional homology).
    """
    module.require_valid()
    if hi - lo < 2:
        raise WindowError(f"window [{lo}, {hi}] too narrow")
    window = module.expand_in_window(lo, hi)
    cx = window.complex
    hdims = cx.homology_dims()
    for margin in (lo + 1, hi - 1):
        if hdims.get(margin, 0):
            raise WindowError(
                f"window too small: homology nonzero at margin degree {margin}",
                degree=margin,
            )
    con = build_contraction(cx)
    actions = [dict() for _ in range(module.r)]
    reps = {}
    for n in range(lo + 1, hi):
        reps[n] = con.i[n]
        if n - 1 >= lo + 1:
            for i in range(1, module.r + 1):
                actions[i - 1][n] = con.pmap(n - 1) @ window.variable_map(i, n) @ con.imap(n)
    return HomologyModule(
        "s", module.r, lo + 1, hi - 1,
        {n: hdims[n] for n in range(lo + 1, hi)}, actions, reps,
    )


class DgLambdaModule:
    """Finite-dimensional dg-module over the group algebra of (Z/2)^r.

    Cells carry degrees; ``d[n]`` maps degree n to n-1 in the per-degree
    cell bases; ``t[i-1][n]`` is the degree-0 action of t_i = 1 + g_i.
    """

    __slots__ = ("r", "cells", "by_degree", "d", "t")

    def __init__(self, r, cells, d, t, check=True):
        self.r = r
        self.cells = [(str(name), int(deg)) for name, deg in cells]
        self.by_degree = {}
        for k, (_, deg) in enumerate(self.cells):
            self.by_degree.setdefault(deg, []).append(k)
        self.d = d
        self.t = t
        if check:
            issues = self.validate()
            if issues:
                raise ValidationError("invalid dg-Lambda-module", issues)

    @property
    def lo(self):
        return min(self.by_degree) if self.by_degree else 0

    @property
    def hi(self):
        return max(self.by_degree) if self.by_degree else 0

    def dim(self, n):
        return len(self.by_degree.get(n, []))

    def total_dim(self):
        return len(self.cells)

    def cell_names(self, n):
        return [self.cells[k][0] for k in self.by_degree.get(n, [])]

    def diff(self, n):
        if n in self.d:
            return self.d[n]
        return Gf2Matrix.zeros(self.dim(n - 1), self.dim(n))

    def tmap(self, i, n):
        return self.t[i - 1].get(n, Gf2Matrix.zeros(self.dim(n), self.dim(n)))

    def degrees(self):
        if not self.by_degree:
            return range(0, 0)
        return range(self.lo, self.hi + 1)

    def validate(self):
        issues = []
        for n in self.degrees():
            dn = self.diff(n)
            if dn.shape != (self.dim(n - 1), self.dim(n)):
                issues.append(f"d_{n} shape {dn.shape} != {(self.dim(n-1), self.dim(n))}")
                continue
            if not (self.diff(n - 1) @ dn).is_zero():
                issues.append(f"d^2 != 0 out of degree {n}")
            for i in range(1, self.r + 1):
                ti = self.tmap(i, n)
                if ti.shape != (self.dim(n), self.dim(n)):
                    issues.append(f"t{i} shape mismatch in degree {n}")
                    continue
                if not (ti @ ti).is_zero():
                    issues.append(f"t{i}^2 != 0 in degree {n}")
                if not (dn @ ti) == (self.tmap(i, n - 1) @ dn):
                    issues.append(f"d t{i} != t{i} d out of degree {n}")
                for j in range(i + 1, self.r + 1):
                    tj = self.tmap(j, n)
                    if not (ti @ tj) == (tj @ ti):
                        issues.append(f"t{i} t{j} != t{j} t{i} in degree {n}")
        return issues

    def to_complex(self):
        dims = {n: self.dim(n) for n in self.degrees()}
        d = {n: self.diff(n) for n in self.degrees() if n > self.lo}
        return GradedKComplex(self.lo, self.hi, dims, d)

    def euler_characteristic(self):
        return sum((-1) ** n * self.dim(n) for n in self.degrees())

    # -- group-permutation structure ----------------------------------------

    def g_permutations(self):
        """Per-generator permutations of cells, or None if the t-action is
        not of permutation type (T_i + 1 not a permutation matrix)."""
        perms = []
        for i in range(1, self.r + 1):
            perm = [None] * len(self.cells)
            for n in self.degrees():
                idxs = self.by_degree.get(n, [])
                dense = self.tmap(i, n).to_dense().copy()
                for local, k in enumerate(idxs):
                    dense[local, local] ^= 1  # P = T + 1
                for col in range(len(idxs)):
                    hot = [row for row in range(len(idxs)) if dense[row, col]]
                    if len(hot) != 1:
                        return None
                    perm[idxs[col]] = idxs[hot[0]]
            col_check = sorted(p for p in perm if p is not None)
            if col_check != list(range(len(self.cells))):
                return None
            perms.append(perm)
        return perms


class FreenessCertificate:
    """One representative per free orbit plus the orbit map."""

    __slots__ = ("r", "reps", "orbit_rep", "group_word")

    def __init__(self, r, reps, orbit_rep, group_word):
        self.r = r
        self.reps = reps          # list of global cell indices
        self.orbit_rep = orbit_rep  # global index -> rep global index
        self.group_word = group_word  # global index -> frozenset J with cell = g(J) rep


def freeness_certificate(module):
    """Certify that a DgLambdaModule is free over the group algebra.

    Requires the t-action to come from a basis permutation action whose
    orbits all have size 2^r.  Raises ValidationError otherwise.
    """
    perms = module.g_permutations()
    if perms is None:
        raise ValidationError("t-action is not a basis permutation action")
    n_cells = len(module.cells)
    orbit_rep, group_word = {}, {}
    reps = []
    seen = set()
    for k in range(n_cells):
        if k in seen:
            continue
        orbit = {}
        for bits in range(1 << module.r):
            j = frozenset(i + 1 for i in range(module.r) if bits >> i & 1)
            target = k
            for i in sorted(j):
                target = perms[i - 1][target]
            orbit[j] = target
        if len(set(orbit.values())) != 1 << module.r:
            name = module.cells[k][0]
            raise ValidationError(
                f"orbit of cell '{name}' has size {len(set(orbit.values()))} "
                f"< {1 << module.r}: action is not free"
            )
        rep = min(orbit.values(), key=lambda t: module.cells[t][0])
        # recompute words relative to the chosen representative
        rep_orbit = {}
        for bits in range(1 << module.r):
            j = frozenset(i + 1 for i in range(module.r) if bits >> i & 1)
            target = rep
            for i in sorted(j):
                target = perms[i - 1][target]
            rep_orbit[j] = target
        reps.append(rep)
        for j, cell in rep_orbit.items():
            orbit_rep[cell] = rep
            group_word[cell] = j
            seen.add(cell)
    reps.sort()
    return FreenessCertificate(module.r, reps, orbit_rep, group_word)


def homology_of_lambda_module(module):
    """Homology of a finite dg-Lambda-module with induced t_i actions."""
    cx = module.to_complex()
    con = build_contraction(cx)
    hdims = cx.homology_dims()
    actions = [dict() for _ in range(module.r)]
    reps = {}
    for n in module.degrees():
        reps[n] = con.i[n]
        for i in range(1, module.r + 1):
            actions[i - 1][n] = con.pmap(n) @ module.tmap(i, n) @ con.imap(n)
    return HomologyModule("lambda", module.r, module.lo, module.hi, hdims, actions, reps)


def reduce_mod_augmentation(module):
    """k (x)_S M for a semifree module: one slot per generator, constant
    terms of the differential entries."""
    module.require_valid()
    degs = [d for _, d in module.gens]
    lo, hi = (min(degs), max(degs)) if degs else (0, 0)
    by_degree = {}
    for a, (_, d) in enumerate(module.gens):
        by_degree.setdefault(d, []).append(a)
    dims = {n: len(by_degree.get(n, [])) for n in range(lo, hi + 1)}
    mats = {}
    for n in range(lo + 1, hi + 1):
        cols = []
        for b in by_degree.get(n, []):
            col = []
            for local, a in enumerate(by_degree.get(n - 1, [])):
                if module.diff[a][b].constant_term():
                    col.append(local)
            cols.append(col)
        mats[n] = Gf2Matrix.from_columns(cols, dims[n - 1])
    return GradedKComplex(lo, hi, dims, mats)


def reduce_lambda_mod_augmentation(module, cert=None):
    """k (x)_Lambda C for a free module, via the orbit-representative basis."""
    if cert is None:
        cert = freeness_certificate(module)
    rep_local = {}
    by_degree = {}
    for rep in cert.reps:
        deg = module.cells[rep][1]
        by_degree.setdefault(deg, []).append(rep)
    for deg, reps in by_degree.items():
        for local, rep in enumerate(reps):
            rep_local[rep] = local
    lo = min(by_degree) if by_degree else 0
    hi = max(by_degree) if by_degree else 0
    dims = {n: len(by_degree.get(n, [])) for n in range(lo, hi + 1)}
    mats = {}
    for n in range(lo + 1, hi + 1):
        cols = []
        for rep in by_degree.get(n, []):
            local_src = module.by_degree[n].index(rep)
            dcol = module.diff(n).to_dense()[:, local_src]
            col = []
            for local_tgt, k in enumerate(module.by_degree.get(n - 1, [])):
                if dcol[local_tgt]:
                    target_rep = cert.orbit_rep[k]
                    col.append(rep_local[target_rep])
            # parity-accumulate duplicates
            counts = {}
            for c in col:
                counts[c] = counts.get(c, 0) ^ 1
            cols.append([c for c, v in counts.items() if v])
        mats[n] = Gf2Matrix.from_columns(cols, dims[n - 1])
    return GradedKComplex(lo, hi, dims, mats)


def euler_identity_check(module, cert=None):
    """Euler-characteristic report for a free finite dg-Lambda-module.

    Checks |chi(C)| = |G| |chi(k (x) C)| exactly, and whether the total
    homology dimension equals |chi(H(C))| (true under the single-parity
    hypothesis).
    """
    if cert is None:
        cert = freeness_certificate(module)
    cx = module.to_complex()
    chi_c = cx.euler_characteristic()
    hdims = cx.homology_dims()
    chi_h = sum((-1) ** n * d for n, d in hdims.items())
    reduced = reduce_lambda_mod_augmentation(module, cert)
    chi_red = reduced.euler_characteristic()
    group_order = 1 << module.r
    dim_h = sum(hdims.values())
    nz = sorted(n for n, d in hdims.items() if d)
    parities = {n & 1 for n in nz}
    return {
        "chi_complex": chi_c,
        "chi_homology": chi_h,
        "chi_reduced": chi_red,
        "group_order": group_order,
        "identity_holds": abs(chi_c) == group_order * abs(chi_red),
        "dim_homology": dim_h,
        "parity_class": ("zero" if not nz else "mixed" if len(parities) == 2
                         else "odd" if parities.pop() else "even"),
        "dim_equals_abs_chi": dim_h == abs(chi_h),
    }


# -- JSON ingestion of Lambda-modules ------------------------------------------

def lambda_module_from_json_dict(data):
    """Build a DgLambdaModule from the generator/action JSON form.

    The differential matrix has entries in the exterior-algebra syntax
    ("t{1}+1"); group elements act through the permutation block
    {"g1": {"cell": "image", ...}, ...}.
    """
    r = int(data["r"])
    cells = [(g["name"], int(g["degree"])) for g in data["generators"]]
    names = [n for n, _ in cells]
    pos = {n: k for k, n in enumerate(names)}
    if len(pos) != len(names):
        raise ValidationError("duplicate cell names")
    perms = []
    action = data.get("action", {})
    for i in range(1, r + 1):
        table = action.get(f"g{i}", {})
        perm = list(range(len(names)))
        for src, dst in table.items():
            if src not in pos or dst not in pos:
                raise ValidationError(f"action g{i} mentions unknown cell {src!r} or {dst!r}")
            perm[pos[src]] = pos[dst]
        perms.append(perm)

    by_degree = {}
    for k, (_, deg) in enumerate(cells):
        by_degree.setdefault(deg, []).append(k)

    def apply_group_word(j_set, k):
        target = k
        for i in sorted(j_set):
            target = perms[i - 1][target]
        return target

    entries = data["differential"]
    if len(entries) != len(cells) or any(len(row) != len(cells) for row in entries):
        raise ValidationError("differential must be square over the cells")
    # expand Lambda coefficients to per-degree k-matrices
    d = {}
    for n in sorted(by_degree):
        src = by_degree.get(n, [])
        tgt = by_degree.get(n - 1, [])
        tgt_local = {k: loc for loc, k in enumerate(tgt)}
        cols = []
        for b in src:
            hits = {}
            for a in range(len(cells)):
                lam = ext_parse(entries[a][b], r)
                if lam.is_zero():
                    continue
                if cells[a][1] != n - 1:
                    raise ValidationError(
                        f"entry ({names[a]},{names[b]}) must land in degree {n-1}"
                    )
                for i_set in lam.terms:
                    # t(I) = prod (1 + g_i): expand over subsets of I
                    subsets = [frozenset()]
                    for i in sorted(i_set):
                        subsets = subsets + [s | {i} for s in subsets]
                    for j in subsets:
                        cell = apply_group_word(j, a)
                        hits[cell] = hits.get(cell, 0) ^ 1
            cols.append([tgt_local[c] for c, v in hits.items() if v])
        d[n] = Gf2Matrix.from_columns(cols, len(tgt))

    from .polyalg import lambda_action_matrices

    t_global = lambda_action_matrices(r, perms)
    t = [dict() for _ in range(r)]
    for i in range(r):
        dense = t_global[i].to_dense()
        for n, idxs in by_degree.items():
            sub = dense[[k for k in idxs], :][:, [k for k in idxs]]
            t[i][n] = Gf2Matrix.from_dense(sub)
    return DgLambdaModule(r, cells, d, t)
