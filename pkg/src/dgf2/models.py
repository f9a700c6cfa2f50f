"""Twisted tensor models over the Koszul pair (polynomial coalgebra,
exterior algebra): the cobar and bar functors, the basic perturbation
lemma, and the two minimal-model pipelines built from them.

Degree conventions (the one table everything else defers to):

====================  =======================================================
object                degree
====================  =======================================================
x_i in S              -1 (monomial of exponent sum e has degree -e)
dual basis of S_c     +e for the dual of an exponent-sum-e monomial
t_i acting on cells   0 (t_i = 1 + g_i, group elements preserve degree)
cobar output          t(I) (x) v sits in deg v; the twist
                      sum_i t_i (x) x_i then has degree -1
bar slot              gamma_m (x) c sits in |m| + deg c; the twist
                      sum_i sigma_i (x) t_i has degree -1
homotopy h            +1
model (dual) gens     -(source class degree); a nonzero model entry from
                      source gen b to target gen a is homogeneous of
                      exponent sum deg(a) - deg(b) + 1
====================  =======================================================

Transferred differentials are computed in factored form: the basic
perturbation lemma for the weight-graded twist sum_i sigma_i (x) t_i
collapses to matrices A_m over the finite complex itself, one per
monomial m, with

    A_m = sum over orderings (i_1 .. i_k) of m of  p T_{i_1} h T_{i_2} h
          ... h T_{i_k} i,

so no weight truncation enters the model construction; truncation only
appears when a model or bar complex is expanded for homology reports.
"""

from __future__ import annotations

import numpy as np

from .complexes import Contraction, GradedKComplex, build_contraction
from .dgmodules import (
    DgLambdaModule,
    DgSModule,
    freeness_certificate,
    homology_of_s_module,
)
from .errors import InternalCheckError, TerminationError, ValidationError, WindowError
from .gf2 import Gf2Matrix
from .polyalg import (
    GradedPoly,
    mono_div,
    mono_divides,
    mono_total,
    mono_var,
    monomials_of_total,
    render_t,
)


# -- cobar ---------------------------------------------------------------------

class _SliceInput:
    """Adapter presenting a window slice as a cobar input: per-degree
    dimensions, multiplication maps, and the slice differential."""

    def __init__(self, window):
        self.window = window
        self.r = window.module.r
        self._lo = window.complex.lo
        self._hi = window.complex.hi

    def degrees(self):
        return range(self._lo, self._hi + 1)

    def dim(self, n):
        return self.window.complex.dim(n)

    def action(self, i, n):
        if n - 1 < self._lo or n > self._hi:
            return Gf2Matrix.zeros(0, 0)
        return self.window.variable_map(i, n)

    def input_diff(self, n):
        return self.window.complex.diff(n)


def cobar_omega(hom):
    """Cobar-type twisted tensor Lambda (x) H for an S-side input.

    Accepts a HomologyModule (zero differential, induced variable
    actions) or a finite window slice of a semifree module (nonzero
    differential, multiplication maps).  Cells t(I) (x) v sit in degree
    deg v; the differential is 1 (x) d + sum_i t_i(mult) (x) x_i(action)
    and the t-action multiplies into the exterior factor.  Output
    dimension is 2^r times the input.

    Raises ValidationError when the assembled differential fails d^2 = 0,
    which signals inconsistent (non-commuting) action matrices.
    """
    from .dgmodules import SWindow

    if isinstance(hom, SWindow):
        hom = _SliceInput(hom)
    r = hom.r
    subsets = list(range(1 << r))

    cells = []
    locator = {}
    by_degree = {}
    for n in hom.degrees():
        dim_n = hom.dim(n)
        if dim_n == 0:
            continue
        local = []
        for bits in subsets:
            i_set = frozenset(i + 1 for i in range(r) if bits >> i & 1)
            for k in range(dim_n):
                locator[(n, bits, k)] = (len(cells), len(local))
                cells.append((f"{render_t(i_set)}*h{n}_{k}", n))
                local.append((bits, k))
        by_degree[n] = local

    def local_index(n, bits, k):
        got = locator.get((n, bits, k))
        return got[1] if got else None

    dmats = {}
    tmats = [dict() for _ in range(r)]
    degrees = sorted(by_degree)
    for n in degrees:
        local = by_degree[n]
        dim_tgt = len(by_degree.get(n - 1, []))
        cols = []
        for bits, k in local:
            col = []
            dmat = hom.input_diff(n)
            if dmat is not None:
                for kp in range(dmat.rows):
                    if dmat.get(kp, k):
                        idx = local_index(n - 1, bits, kp)
                        if idx is not None:
                            col.append(idx)
            for i in range(1, r + 1):
                if bits >> (i - 1) & 1:
                    continue
                act = hom.action(i, n)
                if act.cols == 0 or act.rows == 0:
                    continue
                for kp in range(act.rows):
                    if act.get(kp, k):
                        idx = local_index(n - 1, bits | 1 << (i - 1), kp)
                        if idx is not None:
                            col.append(idx)
            cols.append(col)
        dmats[n] = Gf2Matrix.from_columns(cols, dim_tgt)
        for i in range(1, r + 1):
            tcols = []
            for bits, k in local:
                if bits >> (i - 1) & 1:
                    tcols.append([])
                else:
                    tcols.append([local_index(n, bits | 1 << (i - 1), k)])
            tmats[i - 1][n] = Gf2Matrix.from_columns(tcols, len(local))

    try:
        return DgLambdaModule(r, cells, dmats, tmats)
    except ValidationError as exc:
        raise ValidationError(
            "cobar output is not a dg-module; input action matrices are "
            "inconsistent (must commute and be chain maps)",
            exc.issues,
        )


# -- bar ------------------------------------------------------------------------

class BarComplex:
    """S_c (x) C up to a weight cap, with slot labels (monomial, cell).

    Degrees n <= cap + (bottom cell degree) - 1 have complete incoming
    differentials, so homology is exact on n <= interior_hi.
    """

    __slots__ = ("module", "weight_cap", "complex", "slots", "index", "twisted")

    def __init__(self, module, weight_cap, cx, slots, index, twisted):
        self.module = module
        self.weight_cap = weight_cap
        self.complex = cx
        self.slots = slots
        self.index = index
        self.twisted = twisted

    @property
    def interior_hi(self):
        return self.weight_cap + self.module.lo - 1

    def weight_zero_block(self, n):
        """Restriction of the differential to weight-0 slots (recovers C)."""
        src = [k for k, (m, _) in enumerate(self.slots.get(n, [])) if mono_total(m) == 0]
        tgt = [k for k, (m, _) in enumerate(self.slots.get(n - 1, [])) if mono_total(m) == 0]
        return self.complex.diff(n).take_rows(tgt).take_columns(src)

    def homology_dims(self):
        return self.complex.homology_dims()


def _bar_slots(module, cap):
    slots, index = {}, {}
    lo = module.lo
    hi = module.hi + cap
    for n in range(lo, hi + 1):
        basis = []
        for w in range(0, cap + 1):
            cell_deg = n - w
            idxs = module.by_degree.get(cell_deg, [])
            if not idxs:
                continue
            for mono in monomials_of_total(module.r, w):
                for local in range(len(idxs)):
                    basis.append((mono, cell_deg, local))
            # note: iteration order (weight, monomial, cell) is canonical
        slots[n] = [(m, (cd, loc)) for (m, cd, loc) in basis]
        index[n] = {key: k for k, key in enumerate(basis)}
    return slots, index, lo, hi


def build_bar(module, weight_cap, twisted=True):
    """Assemble S_c (x) C with differential 1 (x) d (+ twist if asked).

    The twist is sum_i sigma_i (x) t_i: it lowers the monomial weight by
    one and applies t_i to the cell, so the truncation at the weight cap
    is a subcomplex and no boundary terms are lost.
    """
    if weight_cap < 0:
        raise WindowError(f"malformed weight cap {weight_cap}")
    slots, index, lo, hi = _bar_slots(module, weight_cap)
    dims = {n: len(slots[n]) for n in slots}
    dmats = {}
    for n in range(lo + 1, hi + 1):
        cols = []
        for (mono, (cell_deg, local)) in slots[n]:
            col = []
            dcell = module.diff(cell_deg)
            for tloc in range(dcell.rows):
                if dcell.get(tloc, local):
                    k = index[n - 1].get((mono, cell_deg - 1, tloc))
                    if k is not None:
                        col.append(k)
            if twisted:
                for i in range(1, module.r + 1):
                    v = mono_var(module.r, i)
                    if not mono_divides(v, mono):
                        continue
                    tmat = module.tmap(i, cell_deg)
                    for tloc in range(tmat.rows):
                        if tmat.get(tloc, local):
                            k = index[n - 1].get((mono_div(mono, v), cell_deg, tloc))
                            if k is not None:
                                col.append(k)
            cols.append(col)
        dmats[n] = Gf2Matrix.from_columns(cols, dims[n - 1])
    cx = GradedKComplex(lo, hi, dims, dmats)
    return BarComplex(module, weight_cap, cx, slots, index, twisted)


def bar_beta(module, weight_cap):
    """The twisted bar complex S_c (x) C (weight-truncated)."""
    return build_bar(module, weight_cap, twisted=True)


def bar_twist_perturbation(module, weight_cap):
    """The twist sum_i sigma_i (x) t_i of the bar complex as an explicit
    Perturbation of the untwisted S_c (x) C."""
    untwisted = build_bar(module, weight_cap, twisted=False)
    twisted = build_bar(module, weight_cap, twisted=True)
    delta = {}
    for n in range(untwisted.complex.lo + 1, untwisted.complex.hi + 1):
        delta[n] = twisted.complex.diff(n) + untwisted.complex.diff(n)
    return Perturbation(untwisted.complex, delta,
                        untwisted.complex.hi - untwisted.complex.lo + 2)


def tensor_contraction(module, base, weight_cap):
    """Extend a contraction of C onto H(C) to S_c (x) C, weight by weight."""
    untwisted = build_bar(module, weight_cap, twisted=False)

    hom_module = DgLambdaModule(
        module.r,
        [(f"h{n}_{k}", n) for n in module.degrees() for k in range(base.small.dim(n))],
        {}, [dict() for _ in range(module.r)], check=False,
    )
    small_bar = build_bar(hom_module, weight_cap, twisted=False)

    def block_extend(kind):
        out = {}
        for n in untwisted.complex.degrees():
            if kind == "i":
                rows, cols = untwisted.complex.dim(n), small_bar.complex.dim(n)
            elif kind == "p":
                rows, cols = small_bar.complex.dim(n), untwisted.complex.dim(n)
            else:
                rows, cols = untwisted.complex.dim(n + 1), untwisted.complex.dim(n)
            dense = np.zeros((rows, cols), dtype=np.uint8)
            src_slots = (small_bar if kind == "i" else untwisted).slots.get(n, [])
            for col, (mono, (cell_deg, local)) in enumerate(src_slots):
                if kind == "i":
                    block = base.imap(cell_deg)
                    tgt_index = untwisted.index[n]
                    tgt_cd = cell_deg
                elif kind == "p":
                    block = base.pmap(cell_deg)
                    tgt_index = small_bar.index[n]
                    tgt_cd = cell_deg
                else:
                    block = base.hmap(cell_deg)
                    tgt_index = untwisted.index.get(n + 1, {})
                    tgt_cd = cell_deg + 1
                for row_local in range(block.rows):
                    if block.get(row_local, local):
                        k = tgt_index.get((mono, tgt_cd, row_local))
                        if k is not None:
                            dense[k, col] = 1
            out[n] = Gf2Matrix.from_dense(dense)
        return out

    i_maps = block_extend("i")
    p_maps = block_extend("p")
    h_maps = block_extend("h")
    return Contraction(untwisted.complex, small_bar.complex, i_maps, p_maps, h_maps), small_bar


# -- basic perturbation lemma ----------------------------------------------------

class Perturbation:
    """A degree -1 square-zero perturbation of a complex's differential."""

    __slots__ = ("target", "delta", "filtration_bound")

    def __init__(self, target, delta, filtration_bound, check=True):
        self.target = target
        self.delta = {n: m for n, m in delta.items()}
        self.filtration_bound = int(filtration_bound)
        if check:
            bad = self.validate()
            if bad:
                raise ValidationError("invalid perturbation", bad)

    def dmap(self, n):
        if n in self.delta:
            return self.delta[n]
        return Gf2Matrix.zeros(self.target.dim(n - 1), self.target.dim(n))

    def validate(self):
        bad = []
        for n in range(self.target.lo + 1, self.target.hi + 1):
            if self.dmap(n).shape != (self.target.dim(n - 1), self.target.dim(n)):
                bad.append(f"delta_{n} shape mismatch")
        if bad:
            return bad
        for n in range(self.target.lo + 2, self.target.hi + 1):
            total_out = self.target.diff(n - 1) + self.dmap(n - 1)
            total_in = self.target.diff(n) + self.dmap(n)
            if not (total_out @ total_in).is_zero():
                bad.append(f"(d + delta)^2 != 0 out of degree {n}")
        return bad


class TransferResult:
    """Output of the perturbation lemma: new small differential and maps."""

    __slots__ = ("small", "i", "p", "h", "series_length")

    def __init__(self, small, i, p, h, series_length):
        self.small = small
        self.i = i
        self.p = p
        self.h = h
        self.series_length = series_length

    def contraction(self, perturbed_big):
        return Contraction(perturbed_big, self.small, self.i, self.p, self.h)


def perturbed_transfer(base, pert):
    """Basic perturbation lemma with side conditions, characteristic 2.

    d' = d_W + sum_k p delta (h delta)^k i,   i' = sum (h delta)^k i,
    p' = sum p (delta h)^k,                   h' = sum (h delta)^k h.

    Series must terminate within the perturbation's filtration bound
    (guaranteed when delta strictly drops a bounded auxiliary grading);
    otherwise TerminationError is raised.
    """
    big, small = base.big, base.small
    if pert.target is not big and pert.target != big:
        raise ValidationError("perturbation target differs from contraction big side")
    bound = pert.filtration_bound
    degrees = list(big.degrees())
    x = {n: base.imap(n) for n in degrees}
    y = {n: base.pmap(n) for n in degrees}
    w = {n: base.hmap(n) for n in degrees}

    d_new = {n: small.diff(n) for n in range(small.lo + 1, small.hi + 1)}
    i_new = dict(x)
    p_new = dict(y)
    h_new = dict(w)

    series_length = 0
    k = 0
    while True:
        for n in degrees:
            if n - 1 >= small.lo and n in d_new:
                term = base.pmap(n - 1) @ pert.dmap(n) @ x[n]
                if not term.is_zero():
                    d_new[n] = d_new[n] + term
                    series_length = max(series_length, k)
        x_next = {n: base.hmap(n - 1) @ pert.dmap(n) @ x[n] for n in degrees}
        y_next = {n: y[n] @ pert.dmap(n + 1) @ base.hmap(n) for n in degrees}
        w_next = {n: base.hmap(n) @ pert.dmap(n + 1) @ w[n] for n in degrees}
        done = all(m.is_zero() for m in x_next.values()) and \
            all(m.is_zero() for m in y_next.values()) and \
            all(m.is_zero() for m in w_next.values())
        if done:
            break
        k += 1
        if k > bound:
            raise TerminationError(
                f"termination bound exceeded: h delta not nilpotent within {bound}"
            )
        x, y, w = x_next, y_next, w_next
        for n in degrees:
            i_new[n] = i_new[n] + x[n]
            p_new[n] = p_new[n] + y[n]
            h_new[n] = h_new[n] + w[n]
        series_length = max(series_length, k)

    small_new = GradedKComplex(small.lo, small.hi, dict(small.dims), d_new, check=False)
    issues = small_new.validate()
    if issues:
        raise InternalCheckError(f"transferred differential invalid: {issues}")
    return TransferResult(small_new, i_new, p_new, h_new, series_length)


# -- factored twist over the finite complex ---------------------------------------

class TwistData:
    """Transferred twist in factored form: one matrix family per monomial."""

    __slots__ = ("r", "hom_dims", "a_maps", "series_length", "lo", "hi")

    def __init__(self, r, hom_dims, a_maps, series_length, lo, hi):
        self.r = r
        self.hom_dims = hom_dims
        self.a_maps = a_maps  # mono -> {src_degree: Gf2Matrix}
        self.series_length = series_length
        self.lo = lo
        self.hi = hi


def transferred_twist(module, con=None):
    """Compute the matrices A_m of the transferred differential on
    S_c (x) H(C) directly over the finite module (no weight window).

    A_m : H_n -> H_{n + |m| - 1}; every nonzero A_m has |m| >= 1, which
    is the minimality of the resulting model.
    """
    if con is None:
        con = build_contraction(module.to_complex())
    big, small = con.big, con.small
    r = module.r
    degrees = list(big.degrees())
    bound = big.hi - big.lo + 2

    def compose_t(i, maps, off):
        # T_i applied after a (small -> big) degree-offset family
        return {n: module.tmap(i, n + off) @ maps[n] for n in degrees}

    def compose_h(maps, off):
        return {n: con.hmap(n + off) @ maps[n] for n in degrees}

    # s_layer[m] : small_n -> big_{n + |m| - 1}
    s_layer = {}
    for i in range(1, r + 1):
        fam = compose_t(i, {n: con.imap(n) for n in degrees}, 0)
        s_layer[mono_var(r, i)] = fam

    a_maps = {}
    series_length = 0
    depth = 1
    while s_layer:
        for m, fam in s_layer.items():
            proj = {n: con.pmap(n + depth - 1) @ fam[n] for n in degrees}
            if any(not mat.is_zero() for mat in proj.values()):
                a_maps[m] = {n: mat for n, mat in proj.items() if not mat.is_zero()}
                series_length = max(series_length, depth - 1)
        next_layer = {}
        for m, fam in s_layer.items():
            if all(mat.is_zero() for mat in fam.values()):
                continue
            lifted = compose_h(fam, depth - 1)
            for i in range(1, r + 1):
                m_next = tuple(
                    e + (1 if j == i - 1 else 0) for j, e in enumerate(m)
                )
                pushed = compose_t(i, lifted, depth)
                if m_next in next_layer:
                    next_layer[m_next] = {
                        n: next_layer[m_next][n] + pushed[n] for n in degrees
                    }
                else:
                    next_layer[m_next] = pushed
        next_layer = {
            m: fam for m, fam in next_layer.items()
            if any(not mat.is_zero() for mat in fam.values())
        }
        depth += 1
        if next_layer and depth > bound + 1:
            raise TerminationError(
                f"twist series exceeded filtration bound {bound}"
            )
        s_layer = next_layer

    hom_dims = {n: small.dim(n) for n in small.degrees()}
    return TwistData(r, hom_dims, a_maps, series_length, small.lo, small.hi)


# -- twisted models ------------------------------------------------------------------

class TwistedModel:
    """Minimal twisted model, stored on the dual (S-module) side.

    Generators correspond to homology classes of the source; their
    S-module degrees are the negated class degrees, and homology
    comparisons happen back on the primal side (see ``homology``).
    """

    __slots__ = ("module", "class_degrees", "provenance")

    def __init__(self, module, class_degrees, provenance):
        self.module = module
        self.class_degrees = class_degrees
        self.provenance = provenance

    @property
    def rank(self):
        return self.module.rank

    @property
    def twist(self):
        return self.module.diff

    def twist_entry_weights(self):
        """Exponent sums of all nonzero twist entries."""
        out = set()
        for row in self.module.diff:
            for entry in row:
                for m in entry.terms:
                    out.add(mono_total(m))
        return out

    def is_minimal(self):
        """Every twist entry has zero constant term."""
        return all(
            entry.constant_term() == 0
            for row in self.module.diff for entry in row
        )

    def homology(self, lo, hi):
        """Primal-side homology dims for degrees lo..hi.

        Computed by expanding the dual module on the mirrored window;
        over a field dim H_n(primal) = dim H_{-n}(dual) exactly.
        """
        window = self.module.expand_in_window(-hi - 1, -lo + 1)
        hdims = window.complex.homology_dims()
        return {n: hdims.get(-n, 0) for n in range(lo, hi + 1)}

    def to_json_dict(self):
        data = self.module.to_json_dict()
        data["provenance"] = self.provenance
        return data

    def to_json(self):
        import json

        return json.dumps(self.to_json_dict(), sort_keys=True, indent=2)


def model_from_twist(twist, source, provenance_extra=None):
    """Assemble the dual S-module of a factored transferred twist."""
    r = twist.r
    gens = []
    class_degrees = []
    locator = {}
    for n in sorted(twist.hom_dims):
        for k in range(twist.hom_dims[n]):
            locator[(n, k)] = len(gens)
            gens.append((f"h{n}_{k}", -n))
            class_degrees.append((n, k))
    m = len(gens)
    diff = [[GradedPoly.zero(r) for _ in range(m)] for _ in range(m)]
    for mono, fam in twist.a_maps.items():
        w = mono_total(mono)
        for n, mat in fam.items():
            for a in range(mat.rows):
                for b in range(mat.cols):
                    if mat.get(a, b):
                        col = locator[(n + w - 1, a)]
                        row = locator[(n, b)]
                        diff[row][col] = diff[row][col] + GradedPoly(r, [mono])
    module = DgSModule(r, gens, diff)
    issues = module.validate()
    if issues:
        raise InternalCheckError(f"model is not a valid dg-S-module: {issues}")
    model = TwistedModel(
        module,
        class_degrees,
        {
            "source": source,
            "series_length": twist.series_length,
            "class_degrees": [list(cd) for cd in class_degrees],
            **(provenance_extra or {}),
        },
    )
    if not model.is_minimal():
        raise InternalCheckError("model twist has a nonzero constant term")
    return model


def minimal_hirsch_brown(module, weight_cap=None, cert=None):
    """Minimal twisted model of a free finite dg-Lambda-module.

    Pipeline: contract C onto H(C), perturb S_c (x) C by the Koszul
    twist, transfer, dualize.  The model has rank dim_k H(C) and its
    primal homology matches the twisted bar complex degreewise.
    """
    if cert is None:
        cert = freeness_certificate(module)
    con = build_contraction(module.to_complex())
    twist = transferred_twist(module, con)
    extra = {"kind": "free-complex", "orbit_reps": [module.cells[k][0] for k in cert.reps]}
    if weight_cap is not None:
        extra["weight_cap"] = weight_cap
    return model_from_twist(twist, "hirsch-brown", extra)


def carlsson_minimal(module, lo, hi):
    """Minimal twisted model of a semifree dg-S-module.

    Pipeline: windowed homology with induced variable actions, cobar to
    a finite Lambda-module, contract, transfer the bar twist, dualize.
    Rank equals dim_k H(cobar); reduction mod the augmentation ideal of
    the result has zero differential.
    """
    hom = homology_of_s_module(module, lo, hi)
    omega = cobar_omega(hom)
    con = build_contraction(omega.to_complex())
    twist = transferred_twist(omega, con)
    return model_from_twist(
        twist,
        "carlsson",
        {
            "window": [lo, hi],
            "omega_dim": omega.total_dim(),
            "omega_homology_dim": sum(twist.hom_dims.values()),
            "input_homology": {str(n): hom.dim(n) for n in hom.degrees() if hom.dim(n)},
        },
    )


# -- arity <= 3 transfer of products ------------------------------------------------

def transfer_ainfty_products(cx, mul, con=None, require_associative=True):
    """Transfer a strictly associative chain-map product to homology.

    ``mul[(p, q)]`` maps C_p (x) C_q -> C_{p+q} in Kronecker column
    order.  Returns (m2, m3) with

        m2[(p, q)]    = p mul (i (x) i)
        m3[(p, q, s)] = p mul (h mul (i (x) i) (x) i)
                      + p mul (i (x) h mul (i (x) i))

    (characteristic 2, no signs).  With the zero differential on
    homology the arity-3 relation reduces to strict associativity of m2.
    """
    if con is None:
        con = build_contraction(cx)

    def mul_block(p, q):
        if (p, q) in mul:
            return mul[(p, q)]
        return Gf2Matrix.zeros(cx.dim(p + q), cx.dim(p) * cx.dim(q))

    degrees = list(cx.degrees())
    issues = []
    for p in degrees:
        for q in degrees:
            if p + q > cx.hi or cx.dim(p) * cx.dim(q) == 0:
                continue
            blk = mul_block(p, q)
            # chain map: d mul = mul (d (x) 1 + 1 (x) d)
            lhs = cx.diff(p + q) @ blk
            rhs_parts = []
            t1 = mul_block(p - 1, q) @ cx.diff(p).kron(Gf2Matrix.identity(cx.dim(q)))
            t2 = mul_block(p, q - 1) @ Gf2Matrix.identity(cx.dim(p)).kron(cx.diff(q))
            rhs = t1 + t2
            if not lhs == rhs:
                issues.append(f"product is not a chain map at ({p},{q})")
    if require_associative:
        for p in degrees:
            for q in degrees:
                for s in degrees:
                    if p + q + s > cx.hi:
                        continue
                    dims = cx.dim(p) * cx.dim(q) * cx.dim(s)
                    if dims == 0:
                        continue
                    left = mul_block(p + q, s) @ mul_block(p, q).kron(
                        Gf2Matrix.identity(cx.dim(s))
                    )
                    right = mul_block(p, q + s) @ Gf2Matrix.identity(cx.dim(p)).kron(
                        mul_block(q, s)
                    )
                    if not left == right:
                        issues.append(f"product not associative at ({p},{q},{s})")
    if issues:
        raise ValidationError("invalid product", issues)

    hdim = {n: con.small.dim(n) for n in degrees}
    m2 = {}
    for p in degrees:
        for q in degrees:
            if hdim.get(p, 0) * hdim.get(q, 0) == 0 or p + q > cx.hi:
                continue
            m2[(p, q)] = con.pmap(p + q) @ mul_block(p, q) @ con.imap(p).kron(con.imap(q))

    def hmu_ii(p, q):
        return con.hmap(p + q) @ mul_block(p, q) @ con.imap(p).kron(con.imap(q))

    m3 = {}
    for p in degrees:
        for q in degrees:
            for s in degrees:
                if hdim.get(p, 0) * hdim.get(q, 0) * hdim.get(s, 0) == 0:
                    continue
                n = p + q + s
                if n + 1 > cx.hi:
                    continue
                t1 = con.pmap(n + 1) @ mul_block(p + q + 1, s) @ hmu_ii(p, q).kron(con.imap(s))
                t2 = con.pmap(n + 1) @ mul_block(p, q + s + 1) @ con.imap(p).kron(hmu_ii(q, s))
                m3[(p, q, s)] = t1 + t2
    return m2, m3
