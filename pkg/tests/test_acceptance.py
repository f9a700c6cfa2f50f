"""Acceptance suite: one test per criterion, exact tolerances, stated
runtime budgets.  Each criterion prints a PASS line (visible with -s or
in captured output); any failure is a hard test failure.

Shared heavy computations (the model suites of criteria 2 and 5) run
once in session fixtures; criterion 3 checks minimality over every
model those suites produced.
"""

import json
import time

import numpy as np
import pytest

from dgf2 import (
    AssociativeTable,
    ExteriorTable,
    Gf2Matrix,
    WtildeTable,
    bar_beta,
    bar_homology,
    basis_crosscheck,
    build_contraction,
    builtin,
    carlsson_minimal,
    cobar_omega,
    euler_identity_check,
    generate_semifree,
    homology_of_s_module,
    koszul_module,
    minimal_hirsch_brown,
    pbw_certificate,
    random_free_complex,
    rank_check,
    simplicial_circle,
    transfer_ainfty_products,
    wtilde_basis,
)
from dgf2.cli import main as cli_main
from dgf2.complexes import random_complex
from dgf2.errors import WindowError
from dgf2.gcomplex import aw_coproduct, cochain_algebra
from dgf2.ranklab import (
    conjugated_koszul,
    default_window,
    direct_sum,
    family_instance,
    suspend,
)


def _report(num, detail):
    print(f"ACCEPTANCE {num}: PASS ({detail})")


# -- shared suites ------------------------------------------------------------

@pytest.fixture(scope="module")
def hirsch_brown_suite():
    """Criterion 2 workload: builtins plus 50 random free complexes."""
    t0 = time.monotonic()
    inputs = [("orbit-1", builtin("orbit", r=1)),
              ("orbit-2", builtin("orbit", r=2)),
              ("orbit-3", builtin("orbit", r=3)),
              ("sphere-1", builtin("sphere", r=1, n=1)),
              ("sphere-2", builtin("sphere", r=1, n=2)),
              ("sphere-3", builtin("sphere", r=1, n=3)),
              ("torus-2", builtin("torus", r=2))]
    for seed in range(25):
        inputs.append((f"rand1-{seed}", random_free_complex(1, seed)))
        inputs.append((f"rand2-{seed}",
                       random_free_complex(2, seed, max_orbits_per_dim=2, max_dim=2)))
    cap = 5
    results = []
    for label, x in inputs:
        assert x.total_cells() <= 24
        module, cert = x.to_lambda_module()
        model = minimal_hirsch_brown(module, weight_cap=cap, cert=cert)
        model_h = model.homology(0, cap - 1)
        bar = bar_beta(module, cap)
        bar_h = bar.homology_dims()
        results.append((label, x, module, cert, model, model_h, bar_h))
    elapsed = time.monotonic() - t0
    return results, cap, elapsed


@pytest.fixture(scope="module")
def carlsson_suite():
    """Criterion 5 workload: 100 seeded instances, r <= 2, rank <= 6,
    with passing windows."""
    t0 = time.monotonic()
    instances = []
    seed = 0
    while len(instances) < 100 and seed < 500:
        r = 1 + (seed % 2)
        kind = seed % 5
        if kind in (0, 1):
            mod = conjugated_koszul(r, seed, shift=(seed // 2) % 3 - 1)
        elif kind == 2 and r == 1:
            mod = direct_sum([conjugated_koszul(1, seed),
                              suspend(conjugated_koszul(1, seed + 13), 1)])
        else:
            mod = generate_semifree(r, 4, 2, seed, density=0.45)
        lo, hi = default_window(mod)
        try:
            hom = homology_of_s_module(mod, lo, hi)
        except WindowError:
            seed += 1
            continue
        if mod.rank <= 6 and hom.total_dim() > 0:
            instances.append((seed, r, mod, lo, hi, hom))
        seed += 1
    assert len(instances) == 100
    results = []
    for seed, r, mod, lo, hi, hom in instances:
        model = carlsson_minimal(mod, lo, hi)
        results.append((seed, r, mod, lo, hi, hom, model))
    elapsed = time.monotonic() - t0
    return results, elapsed


# -- criteria ----------------------------------------------------------------------

def test_criterion_01_contraction_identities():
    t0 = time.monotonic()
    for seed in range(100):
        cx = random_complex(seed, degrees=6, max_dim=12)
        con = build_contraction(cx)
        assert con.verify() == [], f"seed {seed}"
    elapsed = time.monotonic() - t0
    assert elapsed < 5.0, f"runtime {elapsed:.2f}s exceeds 5s"
    _report(1, f"100 complexes, five identities exact, {elapsed:.2f}s")


def test_criterion_02_hirsch_brown_oracle_equivalence(hirsch_brown_suite):
    results, cap, elapsed = hirsch_brown_suite
    for label, x, module, cert, model, model_h, bar_h in results:
        for n in range(0, cap):
            assert model_h.get(n, 0) == bar_h.get(n, 0), (label, n)
    # the antipodal circle: rank-2 model with the weight-2 twist
    circle = next(row for row in results if row[0] == "sphere-1")
    model = circle[4]
    assert model.rank == 2
    assert sum(circle[5].values()) == 2
    assert model.twist_entry_weights() == {2}
    assert elapsed < 30.0, f"runtime {elapsed:.2f}s exceeds 30s"
    _report(2, f"{len(results)} complexes match the bar oracle degreewise, "
               f"{elapsed:.2f}s")


def test_criterion_03_minimality(hirsch_brown_suite, carlsson_suite):
    hb, _, _ = hirsch_brown_suite
    ca, _ = carlsson_suite
    models = [row[4] for row in hb] + [row[6] for row in ca]
    for model in models:
        assert model.is_minimal()
        reduced_zero = all(
            entry.constant_term() == 0
            for row in model.module.diff for entry in row
        )
        assert reduced_zero
    _report(3, f"{len(models)} models, every twist entry in the augmentation ideal")


def test_criterion_04_sphere_ladder():
    for n in (1, 2, 3):
        module, cert = builtin("sphere", r=1, n=n).to_lambda_module()
        model = minimal_hirsch_brown(module, cert=cert)
        total = sum(model.homology(0, n + 2).values())
        assert total == n + 1, (n, total)
    _report(4, "total model homology n+1 for the n-sphere, n = 1, 2, 3")


def test_criterion_05_carlsson_oracle_equivalence(carlsson_suite):
    results, elapsed = carlsson_suite
    for seed, r, mod, lo, hi, hom, model in results:
        model_h = model.homology(lo + 1, hi - 1)
        for n in range(lo + 1, hi):
            assert model_h.get(n, 0) == hom.dim(n), (seed, n)
        # rank = dim H(cobar), with the homology recomputed independently
        omega = cobar_omega(hom)
        h_omega = sum(omega.to_complex().homology_dims().values())
        assert model.rank == h_omega, seed
    assert elapsed < 60.0, f"runtime {elapsed:.2f}s exceeds 60s"
    _report(5, f"100 instances match input homology degreewise, {elapsed:.2f}s")


def test_criterion_06_rank_bound_suite():
    t0 = time.monotonic()
    checked = 0
    same_parity = 0
    for r in (1, 2, 3):
        for seed in range(100):
            mod = generate_semifree(r, 4 + (seed % 3), 2, seed)
            lo, hi = default_window(mod)
            rep = rank_check(mod, lo, hi, instance=f"rand-{r}-{seed}", seed=seed)
            checked += 1
            if rep.verdict == "satisfied":
                same_parity += 1
                assert rep.rank >= rep.bound
                assert rep.omega_differential_zero
                assert rep.omega_dim == rep.bound * sum(rep.h_dims.values())
        for seed in range(80):
            mod = family_instance(r, seed)
            lo, hi = default_window(mod)
            rep = rank_check(mod, lo, hi, instance=f"fam-{r}-{seed}", seed=seed)
            checked += 1
            assert rep.verdict == "satisfied", (r, seed, rep.verdict)
            same_parity += 1
            assert rep.rank >= rep.bound
            assert rep.omega_differential_zero
            assert rep.omega_dim == rep.bound * sum(rep.h_dims.values())
    elapsed = time.monotonic() - t0
    assert checked >= 500
    assert same_parity >= 240
    assert elapsed < 300.0, f"runtime {elapsed:.2f}s exceeds 5 min"
    _report(6, f"{checked} instances ({same_parity} same-parity), zero violations, "
               f"{elapsed:.1f}s")


def test_criterion_07_euler_identity(hirsch_brown_suite):
    results, _, _ = hirsch_brown_suite
    for label, x, module, cert, *_ in results:
        rep = euler_identity_check(module, cert)
        assert rep["identity_holds"], label
        assert abs(rep["chi_complex"]) == rep["group_order"] * abs(rep["chi_reduced"])
    _report(7, f"|chi(C)| = 2^r |chi(k x C)| on all {len(results)} free complexes")


def test_criterion_08_operad_basis():
    pairs = [(n, r) for r in range(1, 10) for n in range(1, 10) if n * r <= 9]
    for n, r in pairs:
        basis = wtilde_basis(n, r)
        assert len(basis) == 2 ** (r * n), (n, r)
        assert len(set(basis)) == len(basis)
        from dgf2.operads import is_normal
        assert all(is_normal(ps.to_tree()) for ps in basis)
    # irreducible sets from exhaustive rewriting
    for n, r in [(2, 1), (3, 1), (2, 2)]:
        rep = basis_crosscheck(n, r)
        assert rep["agree"], (n, r, rep)
    for n, r, cap in [(4, 1, 5), (3, 2, 4), (2, 3, 4)]:
        rep = basis_crosscheck(n, r, max_weight=cap)
        assert rep["agree"], (n, r, rep)
    got = [str(ps) for ps in wtilde_basis(2, 1)]
    assert got == ["(mu, mu)", "(mu, mu t{1})", "(mu t{1}, mu)", "(mu t{1}, mu t{1})"]
    for n, r in [(2, 1), (3, 1), (2, 2)]:
        assert pbw_certificate(n, r)["ok"], (n, r)
    _report(8, f"{len(pairs)} sizes at 2^(rn), rewriting crosschecks, display order, "
               "PBW certificates")


def test_criterion_09_bar_homology():
    t0 = time.monotonic()
    as_table = AssociativeTable()
    for n in (1, 2, 3):
        cell = bar_homology(as_table, n, n + 1)
        assert cell.koszul_dim() == 1
        assert all(v == 0 for k, v in cell.dims.items() if k != n)
    lam = ExteriorTable(1)
    for n in (1, 2, 3, 4):
        assert bar_homology(lam, n, 1).koszul_dim() == 1
    wt = WtildeTable(1)
    for n in (1, 2, 3, 4):
        assert bar_homology(wt, n, 1).dims == bar_homology(lam, n, 1).dims
    # d2^2 = 0 is verified on construction for every cell built above and
    # for a sweep of cells across the tables
    for table in (as_table, lam, ExteriorTable(2), WtildeTable(2)):
        for n in (1, 2, 3):
            for a in (1, 2, 3):
                bar_homology(table, n, a)
    elapsed = time.monotonic() - t0
    assert elapsed < 120.0, f"runtime {elapsed:.2f}s exceeds 2 min"
    _report(9, f"Koszul-dual dims for As and the exterior operad, arity-1 "
               f"column match, d2^2 = 0, {elapsed:.2f}s")


def test_criterion_10_ainfty_transfer():
    x = simplicial_circle()
    aw = aw_coproduct(x)
    cx = aw.complex
    # coassociativity and g-equivariance as exact matrix identities
    for p in cx.degrees():
        for q in cx.degrees():
            for s in cx.degrees():
                n = p + q + s
                if not cx.lo <= n <= cx.hi:
                    continue
                left = aw.block(p + q, p, q).kron(Gf2Matrix.identity(cx.dim(s))) \
                    @ aw.block(n, p + q, s)
                right = Gf2Matrix.identity(cx.dim(p)).kron(aw.block(q + s, q, s)) \
                    @ aw.block(n, p, q + s)
                assert left == right
    module = aw.module
    perms = module.g_permutations()
    for n in cx.degrees():
        for p in cx.degrees():
            q = n - p
            if not cx.lo <= q <= cx.hi:
                continue
            def perm_block(d):
                idxs = module.by_degree.get(d, [])
                mat = np.zeros((len(idxs), len(idxs)), dtype=np.uint8)
                for loc, k in enumerate(idxs):
                    mat[idxs.index(perms[0][k]), loc] = 1
                return Gf2Matrix.from_dense(mat)
            blk = aw.block(n, p, q)
            assert (blk @ perm_block(n)) == (perm_block(p).kron(perm_block(q)) @ blk)

    dual, mul = cochain_algebra(x)
    con = build_contraction(dual)
    m2, m3 = transfer_ainfty_products(dual, mul, con)
    hdim = {n: con.small.dim(n) for n in dual.degrees()}
    # m2 matches the cup product of arbitrary cocycle representatives
    for p in dual.degrees():
        for q in dual.degrees():
            if p + q < dual.lo:
                continue
            zp = dual.diff(p).kernel_basis()
            zq = dual.diff(q).kernel_basis()
            for a in range(zp.cols):
                for b in range(zq.cols):
                    va, vb = zp.take_columns([a]), zq.take_columns([b])
                    lhs = con.pmap(p + q) @ (mul[(p, q)] @ va.kron(vb))
                    rhs = m2[(p, q)] @ ((con.pmap(p) @ va).kron(con.pmap(q) @ vb))
                    assert lhs == rhs
    # Stasheff arity 3 with zero differential on homology: the assoc
    # defect (the boundary of the produced m3) vanishes identically

    def m2b(a, b):
        return m2.get((a, b), Gf2Matrix.zeros(hdim.get(a + b, 0),
                                              hdim.get(a, 0) * hdim.get(b, 0)))

    for p in dual.degrees():
        for q in dual.degrees():
            for s in dual.degrees():
                if hdim.get(p, 0) * hdim.get(q, 0) * hdim.get(s, 0) == 0:
                    continue
                left = m2b(p + q, s) @ m2b(p, q).kron(Gf2Matrix.identity(hdim[s]))
                right = m2b(p, q + s) @ Gf2Matrix.identity(hdim[p]).kron(m2b(q, s))
                assert left == right
    assert isinstance(m3, dict)
    _report(10, "cup oracle, Stasheff arity-3, coassociativity, equivariance")


def test_criterion_11_cli_determinism(capsys, tmp_path):
    circle = tmp_path / "circle.json"
    circle.write_text(builtin("sphere", r=1, n=1).to_json())
    koszul = tmp_path / "koszul.json"
    koszul.write_text(koszul_module(2).to_json())

    def run(argv):
        code = cli_main(argv)
        out = capsys.readouterr().out
        return code, out

    commands = [
        ["hirsch-brown", "--complex", str(circle)],
        ["carlsson", str(koszul), "--window", "-6", "2"],
        ["rank-check", "--random", "2", "5", "11", "--count", "4"],
        ["operad-basis", "3", "1"],
        ["operad-koszul", "2", "2", "1"],
        ["euler", "--complex", str(circle)],
        ["homology", str(koszul), "--window", "-6", "2"],
    ]
    for argv in commands:
        code1, out1 = run(argv)
        code2, out2 = run(argv)
        assert code1 == code2 == 0, argv
        assert out1 == out2, argv
    _, one = run(["rank-check", "--random", "2", "4", "3", "--count", "8", "--jobs", "1"])
    _, four = run(["rank-check", "--random", "2", "4", "3", "--count", "8", "--jobs", "4"])
    assert one == four
    _report(11, "byte-identical reruns, --jobs 4 equals --jobs 1")
