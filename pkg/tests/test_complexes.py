"""Tests for chain complexes and the contraction builder."""

import pytest

from dgf2 import Gf2Matrix, GradedKComplex, build_contraction
from dgf2.complexes import homology_data, random_complex
from dgf2.errors import ValidationError


def two_term(mat):
    return GradedKComplex(0, 1, {0: mat.rows, 1: mat.cols}, {1: mat})


def test_acyclic_two_term():
    cx = two_term(Gf2Matrix.identity(1))
    assert cx.homology_dims() == {0: 0, 1: 0}


def test_zero_differential_two_term():
    cx = two_term(Gf2Matrix.zeros(1, 1))
    assert cx.homology_dims() == {0: 1, 1: 1}


def test_circle_as_k_complex():
    # cells v, gv / e, ge with d(e) = v + gv, d(ge) = v + gv
    d = Gf2Matrix.from_rows([[1, 1], [1, 1]])
    cx = two_term(d)
    assert cx.homology_dims() == {0: 1, 1: 1}


def test_invalid_complex_rejected():
    d1 = Gf2Matrix.identity(1)
    d2 = Gf2Matrix.identity(1)
    with pytest.raises(ValidationError):
        GradedKComplex(0, 2, {0: 1, 1: 1, 2: 1}, {1: d1, 2: d2})


def test_contraction_on_zero_differential():
    cx = GradedKComplex(0, 2, {0: 2, 1: 3, 2: 1}, {})
    con = build_contraction(cx)
    assert con.verify() == []
    for n in cx.degrees():
        assert con.imap(n) == Gf2Matrix.identity(cx.dim(n))
        assert con.pmap(n) == Gf2Matrix.identity(cx.dim(n))
        assert con.hmap(n).is_zero()


def test_contraction_rank_one_example():
    # 0 -> k^2 -> k^2 with d = [[0,0],[1,0]]
    cx = two_term(Gf2Matrix.from_rows([[0, 0], [1, 0]]))
    con = build_contraction(cx)
    assert con.small.dims == {0: 1, 1: 1}
    assert con.verify() == []


@pytest.mark.parametrize("seed", range(30))
def test_contraction_identities_random(seed):
    cx = random_complex(seed)
    con = build_contraction(cx)
    assert con.verify() == []
    # small side carries the homology with zero differential
    assert {n: con.small.dim(n) for n in cx.degrees()} == cx.homology_dims()
    for n in range(cx.lo + 1, cx.hi + 1):
        assert con.small.diff(n).is_zero()


@pytest.mark.parametrize("seed", range(15))
def test_euler_characteristic_homology_invariant(seed):
    cx = random_complex(seed, degrees=5, max_dim=9)
    chi_c = cx.euler_characteristic()
    h = cx.homology_dims()
    chi_h = sum((-1) ** n * d for n, d in h.items())
    assert chi_c == chi_h


def test_homology_data_representatives_are_cycles():
    cx = random_complex(42)
    data = homology_data(cx)
    for n, (reps, boundaries) in data.items():
        assert (cx.diff(n) @ reps).is_zero()
        assert reps.cols == cx.homology_dims()[n]
        assert boundaries.rank() == boundaries.cols


def test_determinism():
    a = build_contraction(random_complex(5))
    b = build_contraction(random_complex(5))
    for n in a.big.degrees():
        assert a.imap(n) == b.imap(n)
        assert a.pmap(n) == b.pmap(n)
        assert a.hmap(n) == b.hmap(n)
