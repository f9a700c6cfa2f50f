"""Rank-bound laboratory: instance generation and the verification
pipeline for the lower bound 2^r <= rank over the polynomial ring, in
the case where all nonzero homology sits in one parity.

A found violation of the bound (or of the equalities it rests on) is
treated as a bug in this artifact and raised as InternalCheckError,
never reported as a discovery.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dgmodules import DgSModule, homology_of_s_module, reduce_mod_augmentation
from .errors import InternalCheckError, ValidationError, WindowError
from .models import cobar_omega
from .polyalg import GradedPoly, monomials_of_total


# -- instances -------------------------------------------------------------------

def koszul_module(r, degree=0):
    """The rank-2^r Koszul complex: exterior generators in one common
    degree, d(e_I) = sum_i x_i e_{I \\ i}."""
    gens = [(f"k{bits}", degree) for bits in range(1 << r)]
    diff = [[GradedPoly.zero(r) for _ in range(1 << r)] for _ in range(1 << r)]
    for bits in range(1 << r):
        for i in range(1, r + 1):
            if bits >> (i - 1) & 1:
                diff[bits ^ (1 << (i - 1))][bits] = GradedPoly.var(r, i)
    return DgSModule(r, gens, diff)


def generate_semifree(r, m, spread, seed, density=0.3, max_entry_total=3):
    """Seeded random semifree module with a strictly triangular
    differential; offending entries are cleared deterministically until
    d^2 = 0 (the zero matrix always works, so this terminates)."""
    if m < 1:
        raise ValidationError("need at least one generator")
    rng = np.random.default_rng(seed)
    degrees = [int(rng.integers(-spread, spread + 1)) for _ in range(m)]
    order = list(rng.permutation(m))
    gens = [(f"g{a}", degrees[a]) for a in range(m)]
    diff = [[GradedPoly.zero(r) for _ in range(m)] for _ in range(m)]
    for pa in range(m):
        for pb in range(pa + 1, m):
            a, b = order[pa], order[pb]
            w = degrees[a] - degrees[b] + 1
            if w < 0 or w > max_entry_total:
                continue
            if rng.random() >= density:
                continue
            monos = monomials_of_total(r, w)
            count = int(rng.integers(1, min(2, len(monos)) + 1))
            picks = rng.choice(len(monos), size=count, replace=False)
            terms = set()
            for k in picks:
                terms ^= {monos[int(k)]}
            diff[a][b] = GradedPoly(r, terms)
    module = DgSModule(r, gens, diff)
    # clear entries until d^2 = 0 (falls back to a sparser differential)
    while True:
        square_bad = None
        for a in range(m):
            for b in range(m):
                acc = GradedPoly.zero(r)
                for c in range(m):
                    acc = acc + module.diff[a][c] * module.diff[c][b]
                if not acc.is_zero():
                    square_bad = (a, b)
                    break
            if square_bad:
                break
        if not square_bad:
            break
        a, b = square_bad
        for c in range(m):
            if not module.diff[a][c].is_zero() and not module.diff[c][b].is_zero():
                module.diff[c][b] = GradedPoly.zero(r)
                break
    return module


def suspend(module, shift):
    """Shift all generator degrees; entry degrees depend on differences
    only, so validity is preserved."""
    gens = [(name, deg + shift) for name, deg in module.gens]
    return DgSModule(module.r, gens, [list(row) for row in module.diff])


def direct_sum(mods):
    r = mods[0].r
    gens = []
    for k, mod in enumerate(mods):
        gens.extend((f"s{k}_{name}", deg) for name, deg in mod.gens)
    total = len(gens)
    diff = [[GradedPoly.zero(r) for _ in range(total)] for _ in range(total)]
    offset = 0
    for mod in mods:
        m = mod.rank
        for a in range(m):
            for b in range(m):
                diff[offset + a][offset + b] = mod.diff[a][b]
        offset += m
    return DgSModule(r, gens, diff)


def conjugated_koszul(r, seed, shift=0, extra_entry_cap=2):
    """Koszul complex conjugated by a random unitriangular degree-0
    automorphism (same homology, scrambled presentation)."""
    rng = np.random.default_rng(seed)
    base = suspend(koszul_module(r), shift)
    m = base.rank
    degrees = [deg for _, deg in base.gens]
    # N strictly triangular in a random order, entries of exponent sum
    # deg(a) - deg(b), so phi = 1 + N preserves degrees
    order = list(rng.permutation(m))
    nil = [[GradedPoly.zero(r) for _ in range(m)] for _ in range(m)]
    for pa in range(m):
        for pb in range(pa + 1, m):
            a, b = order[pa], order[pb]
            w = degrees[a] - degrees[b]
            if w < 0 or w > extra_entry_cap:
                continue
            if rng.random() < 0.5:
                monos = monomials_of_total(r, w)
                pick = monos[int(rng.integers(0, len(monos)))]
                nil[a][b] = GradedPoly(r, [pick])

    def mat_mul(x, y):
        return [[_dot(x, y, a, b, r) for b in range(m)] for a in range(m)]

    ident = [[GradedPoly.one(r) if a == b else GradedPoly.zero(r) for b in range(m)]
             for a in range(m)]
    phi = [[ident[a][b] + nil[a][b] for b in range(m)] for a in range(m)]
    # phi^-1 = 1 + N + N^2 + ... (N is nilpotent)
    inv = [row[:] for row in ident]
    power = [row[:] for row in nil]
    while any(not e.is_zero() for row in power for e in row):
        inv = [[inv[a][b] + power[a][b] for b in range(m)] for a in range(m)]
        power = mat_mul(power, nil)
    new_diff = mat_mul(mat_mul(phi, base.diff), inv)
    return DgSModule(r, base.gens, new_diff)


def _dot(x, y, a, b, r):
    acc = GradedPoly.zero(r)
    rows = x[a] if isinstance(x, list) else x.diff[a]
    for c in range(len(rows)):
        ycol = y[c][b] if isinstance(y, list) else y.diff[c][b]
        acc = acc + rows[c] * ycol
    return acc


def family_instance(r, seed):
    """Structured same-parity-rich instance family: conjugated Koszul
    complexes, direct sums, and even suspensions."""
    rng = np.random.default_rng(seed)
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return conjugated_koszul(r, seed)
    if kind == 1:
        return direct_sum([
            conjugated_koszul(r, seed * 2 + 1),
            suspend(conjugated_koszul(r, seed * 2 + 2), 2 * int(rng.integers(-1, 2))),
        ])
    return suspend(conjugated_koszul(r, seed + 7), int(rng.integers(-2, 3)))


# -- reports -----------------------------------------------------------------------

@dataclass
class RankReport:
    instance: str
    seed: int | None
    r: int
    rank: int
    window: list
    verdict: str
    bound: int
    parity: str = "unknown"
    h_dims: dict = field(default_factory=dict)
    dim_h_reduced: int | None = None
    omega_dim: int | None = None
    omega_differential_zero: bool | None = None
    detail: str = ""

    def to_json_dict(self):
        return {
            "instance": self.instance,
            "seed": self.seed,
            "r": self.r,
            "rank": self.rank,
            "window": list(self.window),
            "verdict": self.verdict,
            "bound": self.bound,
            "parity": self.parity,
            "h_dims": {str(k): v for k, v in sorted(self.h_dims.items())},
            "dim_h_reduced": self.dim_h_reduced,
            "omega_dim": self.omega_dim,
            "omega_differential_zero": self.omega_differential_zero,
            "detail": self.detail,
        }


def rank_check(module, lo, hi, instance="module", seed=None):
    """Full pipeline: windowed homology, parity class, reduced homology,
    and (in the same-parity case) the equality chain through the cobar
    construction.  Equality or bound failures on a same-parity instance
    raise InternalCheckError."""
    bound = 1 << module.r
    report = RankReport(
        instance=instance, seed=seed, r=module.r, rank=module.rank,
        window=[lo, hi], verdict="", bound=bound,
    )
    issues = module.validate()
    if issues:
        report.verdict = "invalid"
        report.detail = "; ".join(issues[:3])
        return report
    try:
        hom = homology_of_s_module(module, lo, hi)
    except WindowError as exc:
        report.verdict = "window failure"
        report.detail = str(exc)
        return report
    report.h_dims = {n: hom.dim(n) for n in hom.degrees() if hom.dim(n)}
    report.parity = hom.parity_class()
    reduced = reduce_mod_augmentation(module)
    dim_h_reduced = sum(reduced.homology_dims().values())
    report.dim_h_reduced = dim_h_reduced

    if report.parity == "zero":
        report.verdict = "hypothesis not met: zero homology"
        return report
    if report.parity == "mixed":
        report.verdict = "parity hypothesis violated"
        return report

    omega = cobar_omega(hom)
    report.omega_dim = omega.total_dim()
    omega_zero = all(omega.diff(n).is_zero() for n in omega.degrees())
    report.omega_differential_zero = omega_zero
    dim_h = hom.total_dim()
    if not omega_zero:
        raise InternalCheckError(
            f"{instance}: cobar differential nonzero on a same-parity instance"
        )
    if report.omega_dim != bound * dim_h:
        raise InternalCheckError(
            f"{instance}: dim cobar = {report.omega_dim} != {bound}*{dim_h}"
        )
    if dim_h_reduced != report.omega_dim:
        raise InternalCheckError(
            f"{instance}: dim H(k(x)M) = {dim_h_reduced} != dim cobar = {report.omega_dim}"
        )
    if not (module.rank >= dim_h_reduced >= bound):
        raise InternalCheckError(
            f"{instance}: rank chain violated: {module.rank} >= {dim_h_reduced} >= {bound}"
        )
    report.verdict = "satisfied"
    return report


def parity_equality_check(module, lo, hi):
    """The proof-path equalities for a same-parity instance.

    Precondition failure (mixed parity or zero homology) raises
    ValidationError; an equality failure would contradict established
    mathematics and raises InternalCheckError.
    """
    hom = homology_of_s_module(module, lo, hi)
    parity = hom.parity_class()
    if parity in ("mixed", "zero"):
        raise ValidationError(
            f"precondition rejected: parity class is {parity!r}"
        )
    omega = cobar_omega(hom)
    omega_zero = all(omega.diff(n).is_zero() for n in omega.degrees())
    if not omega_zero:
        raise InternalCheckError("cobar differential nonzero under parity hypothesis")
    expected = (1 << module.r) * hom.total_dim()
    if omega.total_dim() != expected:
        raise InternalCheckError(
            f"dim cobar = {omega.total_dim()}, expected {expected}"
        )
    reduced_total = sum(reduce_mod_augmentation(module).homology_dims().values())
    if reduced_total != omega.total_dim():
        raise InternalCheckError(
            f"dim H(k(x)M) = {reduced_total} != {omega.total_dim()}"
        )
    return {
        "parity": parity,
        "dim_homology": hom.total_dim(),
        "omega_dim": omega.total_dim(),
        "omega_differential_zero": True,
        "dim_h_reduced": reduced_total,
        "equalities_hold": True,
    }


# -- batch runs ------------------------------------------------------------------------

def default_window(module, depth=8):
    degs = [d for _, d in module.gens]
    return min(degs) - depth, max(degs) + 2


def _batch_worker(spec):
    kind = spec.get("kind", "random")
    r, seed = spec["r"], spec["seed"]
    if kind == "random":
        module = generate_semifree(r, spec.get("m", 4), spec.get("spread", 2), seed,
                                   density=spec.get("density", 0.3))
    else:
        module = family_instance(r, seed)
    lo, hi = spec.get("window") or default_window(module)
    report = rank_check(module, lo, hi, instance=f"{kind}-r{r}-s{seed}", seed=seed)
    return report.to_json_dict()


def run_rank_batch(specs, jobs=1):
    """Run rank checks over instance specs; output is sorted by
    (instance, seed) so --jobs N matches --jobs 1 exactly."""
    if jobs <= 1:
        results = [_batch_worker(s) for s in specs]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_batch_worker, specs, chunksize=8))
    return sorted(results, key=lambda d: (d["instance"], d["seed"] if d["seed"] is not None else -1))


def batch_to_json(results):
    return json.dumps(results, sort_keys=True, indent=2)
