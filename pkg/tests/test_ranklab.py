"""Tests for instance generation and the rank-bound pipeline."""

import pytest

from dgf2 import (
    DgSModule,
    GradedPoly,
    conjugated_koszul,
    family_instance,
    generate_semifree,
    homology_of_s_module,
    koszul_module,
    parity_equality_check,
    poly_parse,
    rank_check,
    run_rank_batch,
)
from dgf2.errors import ValidationError
from dgf2.ranklab import default_window, direct_sum, suspend


def cone_of_x1_squared():
    z = GradedPoly.zero(1)
    return DgSModule(1, [("e0", 0), ("e1", -1)],
                     [[z, poly_parse("x1^2", 1)], [z, z]])


def test_generator_seed_determinism():
    a = generate_semifree(2, 5, 2, 123)
    b = generate_semifree(2, 5, 2, 123)
    assert a.to_json() == b.to_json()
    c = generate_semifree(2, 5, 2, 124)
    assert c.to_json() != a.to_json()


@pytest.mark.parametrize("seed", range(60))
def test_generator_always_valid(seed):
    for r in (1, 3):
        assert generate_semifree(r, 4, 2, seed).validate() == []


def test_koszul_preset_shape():
    k = koszul_module(2)
    assert k.rank == 4
    assert k.validate() == []
    nonzero = sum(1 for row in k.diff for e in row if not e.is_zero())
    assert nonzero == 4  # one x_i entry per (I, I minus i) pair


def test_conjugated_koszul_same_homology():
    for seed in (0, 5, 9):
        m = conjugated_koszul(2, seed)
        assert m.validate() == []
        hom = homology_of_s_module(m, -7, 3)
        assert hom.total_dim() == 1


def test_rank_check_koszul_r3():
    rep = rank_check(koszul_module(3), -8, 2, instance="koszul3")
    assert rep.verdict == "satisfied"
    assert rep.rank == 8
    assert rep.h_dims == {0: 1}
    assert rep.parity == "even"
    assert rep.dim_h_reduced == 8 == rep.bound
    assert rep.omega_differential_zero


def test_rank_check_mixed_parity_cone():
    rep = rank_check(cone_of_x1_squared(), -8, 2, instance="cone")
    assert rep.verdict == "parity hypothesis violated"
    assert rep.rank == 2 and rep.bound == 2
    assert rep.rank >= rep.bound
    assert rep.parity == "mixed"


def test_rank_check_zero_homology():
    z = GradedPoly.zero(1)
    # acyclic: d(e1) = e0 with matching degrees
    m = DgSModule(1, [("e0", 0), ("e1", 1)], [[z, poly_parse("1", 1)], [z, z]])
    rep = rank_check(m, -6, 3, instance="acyclic")
    assert rep.verdict == "hypothesis not met: zero homology"


def test_rank_check_window_failure():
    z = GradedPoly.zero(1)
    free = DgSModule(1, [("e", 0)], [[z]])
    rep = rank_check(free, -5, 2, instance="free")
    assert rep.verdict == "window failure"


def test_rank_check_invalid_module():
    z = GradedPoly.zero(1)
    x = GradedPoly.var(1, 1)
    bad = DgSModule(1, [("e", 0), ("f", 0)], [[z, x], [x, z]])
    rep = rank_check(bad, -5, 2, instance="bad")
    assert rep.verdict == "invalid"


def test_parity_equality_koszul():
    rep = parity_equality_check(koszul_module(2), -6, 2)
    assert rep["equalities_hold"]
    assert rep["omega_dim"] == 4 == rep["dim_h_reduced"]
    assert rep["omega_differential_zero"]


def test_parity_equality_even_dim_three():
    # three even classes for r=2: omega dim = 4 * 3 = 12
    m = direct_sum([
        koszul_module(2),
        suspend(koszul_module(2), -2),
        suspend(koszul_module(2), 2),
    ])
    rep = parity_equality_check(m, -10, 5)
    assert rep["dim_homology"] == 3
    assert rep["omega_dim"] == 12 == rep["dim_h_reduced"]


def test_parity_equality_rejects_mixed():
    with pytest.raises(ValidationError) as err:
        parity_equality_check(cone_of_x1_squared(), -8, 2)
    assert "precondition" in str(err.value)


@pytest.mark.parametrize("r", [1, 2])
def test_family_instances_satisfy(r):
    for seed in range(20):
        mod = family_instance(r, seed)
        lo, hi = default_window(mod)
        rep = rank_check(mod, lo, hi, instance=f"fam{r}-{seed}", seed=seed)
        assert rep.verdict == "satisfied"
        assert rep.rank >= rep.bound


def test_batch_jobs_agree():
    specs = [{"kind": "random", "r": 2, "m": 4, "seed": s, "spread": 2}
             for s in range(12)]
    one = run_rank_batch(specs, jobs=1)
    four = run_rank_batch(specs, jobs=4)
    assert one == four


def test_report_json_shape():
    rep = rank_check(koszul_module(1), -5, 2, instance="k1", seed=0)
    data = rep.to_json_dict()
    assert data["verdict"] == "satisfied"
    assert data["bound"] == 2
    assert data["h_dims"] == {"0": 1}
