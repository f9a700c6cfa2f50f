"""Tests for free group-action cell complexes and the coproduct."""

import json

import pytest

from dgf2 import (
    FreeGComplex,
    Gf2Matrix,
    aw_coproduct,
    builtin,
    cochain_algebra,
    euler_identity_check,
    homology_of_lambda_module,
    parse_complex,
    random_free_complex,
    simplicial_circle,
)
from dgf2.errors import ValidationError


def circle_data():
    return {
        "r": 1,
        "cells": [
            {"name": "a0", "dim": 0}, {"name": "b0", "dim": 0},
            {"name": "a1", "dim": 1}, {"name": "b1", "dim": 1},
        ],
        "action": {"g1": {"a0": "b0", "b0": "a0", "a1": "b1", "b1": "a1"}},
        "boundary": {
            "a1": [["1", "a0"], ["g1", "a0"]],
            "b1": [["1", "b0"], ["g1", "b0"]],
        },
    }


def test_orbit_is_regular_representation():
    lm, cert = builtin("orbit", r=2).to_lambda_module()
    assert lm.total_dim() == 4
    assert len(cert.reps) == 1
    assert all(lm.diff(n).is_zero() for n in lm.degrees())
    hom = homology_of_lambda_module(lm)
    assert hom.total_dim() == 4


def test_circle_translates_to_t_basis_differential():
    lm, _ = builtin("sphere", r=1, n=1).to_lambda_module()
    # d(e) = t v in the t-basis is d(e) = v + g v on cells
    d1 = lm.diff(1)
    assert d1 == Gf2Matrix.from_rows([[1, 1], [1, 1]])
    t0 = lm.tmap(1, 0)
    assert t0 == Gf2Matrix.from_rows([[1, 1], [1, 1]])


def test_non_equivariant_boundary_rejected():
    # d(a1) = a0 forces d(b1) = b0; the file claims d(b1) = a0
    data = circle_data()
    data["boundary"]["a1"] = [["1", "a0"]]
    data["boundary"]["b1"] = [["1", "a0"]]
    with pytest.raises(ValidationError) as err:
        FreeGComplex.from_json_dict(data)
    assert "equivariant" in str(err.value)


def test_fixed_cell_rejected():
    data = circle_data()
    data["action"]["g1"]["a0"] = "a0"
    data["action"]["g1"]["b0"] = "b0"
    with pytest.raises(ValidationError) as err:
        FreeGComplex.from_json_dict(data)
    assert "not free" in str(err.value) or "not an involution" in str(err.value)


def test_small_orbit_under_r2_rejected():
    # 2 cells with both generators acting by the same swap: orbit size 2
    data = {
        "r": 2,
        "cells": [{"name": "p", "dim": 0}, {"name": "q", "dim": 0}],
        "action": {
            "g1": {"p": "q", "q": "p"},
            "g2": {"p": "q", "q": "p"},
        },
        "boundary": {},
    }
    with pytest.raises(ValidationError) as err:
        FreeGComplex.from_json_dict(data)
    assert "orbit" in str(err.value) and "'p'" in str(err.value)


def test_sphere_homology():
    for n in (1, 2, 3):
        lm, _ = builtin("sphere", r=1, n=n).to_lambda_module()
        dims = lm.to_complex().homology_dims()
        expected = {d: (1 if d in (0, n) else 0) for d in range(n + 1)}
        assert dims == expected


def test_torus_kunneth_oracle():
    """Tensor-of-circles oracle: H(T^r) dims are binomial coefficients."""
    x = builtin("torus", r=2)
    assert x.total_cells() == 16
    dims = x.to_complex().homology_dims()
    circle = {0: 1, 1: 1}
    expected = {}
    for p, dp in circle.items():
        for q, dq in circle.items():
            expected[p + q] = expected.get(p + q, 0) + dp * dq
    assert dims == expected


def test_builtin_orbit_sizes():
    for r in (1, 2, 3):
        x = builtin("orbit", r=r)
        assert x.total_cells() == (1 << r) * x.orbit_count()


def test_builtin_torus_r3_binomial_dims():
    x = builtin("torus", r=3)
    assert x.total_cells() == 64
    assert x.to_complex().homology_dims() == {0: 1, 1: 3, 2: 3, 3: 1}


def test_builtin_unsupported_parameters():
    with pytest.raises(ValidationError):
        builtin("sphere", r=2, n=1)
    with pytest.raises(ValidationError):
        builtin("klein", r=1)


def test_json_round_trip():
    x = builtin("torus", r=2)
    again = FreeGComplex.from_json_dict(json.loads(x.to_json()))
    assert x == again


def test_handwritten_circle_equals_builtin(tmp_path):
    path = tmp_path / "circle.json"
    path.write_text(json.dumps(circle_data()))
    x = parse_complex(str(path))
    assert x == builtin("sphere", r=1, n=1)


def test_random_free_complexes_validate():
    for seed in range(15):
        x = random_free_complex(2, seed)
        assert x.total_cells() == 4 * x.orbit_count()
        lm, cert = x.to_lambda_module()
        assert lm.validate() == []
        rep = euler_identity_check(lm, cert)
        assert rep["identity_holds"]


def test_euler_identity_on_builtins():
    for x in [builtin("orbit", r=1), builtin("orbit", r=3),
              builtin("sphere", r=1, n=2), builtin("torus", r=2)]:
        lm, cert = x.to_lambda_module()
        rep = euler_identity_check(lm, cert)
        assert rep["identity_holds"]
        assert abs(rep["chi_complex"]) == rep["group_order"] * abs(rep["chi_reduced"])


# -- coproduct ------------------------------------------------------------------

def test_one_simplex_coproduct():
    # a single edge [v0, v1]: front/back faces give v0 (x) e + e (x) v1
    lm, _ = builtin("sphere", r=1, n=1).to_lambda_module()
    aw = aw_coproduct(builtin("sphere", r=1, n=1))
    cx = aw.complex
    # cells in degree 0: a0, b0; degree 1: a1 = [a0, b0]
    col_a1 = 0  # canonical order puts a1 first in degree 1
    blk01 = aw.block(1, 0, 1).to_dense()
    blk10 = aw.block(1, 1, 0).to_dense()
    # Delta(a1) = a0 (x) a1 + a1 (x) b0
    assert blk01[:, col_a1].sum() == 1
    assert blk10[:, col_a1].sum() == 1


def test_coproduct_requires_vertices():
    with pytest.raises(ValidationError) as err:
        aw_coproduct(builtin("sphere", r=1, n=2))
    assert "simplicial" in str(err.value)


def _coassoc_holds(aw):
    cx = aw.complex
    for p in cx.degrees():
        for q in cx.degrees():
            for s in cx.degrees():
                n = p + q + s
                if n > cx.hi or n < cx.lo:
                    continue
                left = aw.block(p + q, p, q).kron(Gf2Matrix.identity(cx.dim(s))) \
                    @ aw.block(n, p + q, s)
                right = Gf2Matrix.identity(cx.dim(p)).kron(aw.block(q + s, q, s)) \
                    @ aw.block(n, p, q + s)
                if not left == right:
                    return False
    return True


def _chain_map_holds(aw):
    cx = aw.complex
    for n in cx.degrees():
        for p in cx.degrees():
            q = n - 1 - p
            if q < cx.lo or q > cx.hi:
                continue
            lhs = aw.block(n - 1, p, q) @ cx.diff(n)
            rhs = cx.diff(p + 1).kron(Gf2Matrix.identity(cx.dim(q))) @ aw.block(n, p + 1, q) \
                + Gf2Matrix.identity(cx.dim(p)).kron(cx.diff(q + 1)) @ aw.block(n, p, q + 1)
            if not lhs == rhs:
                return False
    return True


def test_simplicial_circle_coassociative_chain_map():
    aw = aw_coproduct(simplicial_circle())
    assert _coassoc_holds(aw)
    assert _chain_map_holds(aw)


def test_minimal_circle_coassociative_chain_map():
    aw = aw_coproduct(builtin("sphere", r=1, n=1))
    assert _coassoc_holds(aw)
    assert _chain_map_holds(aw)


def _permutation_blocks(module, gen_index):
    perms = module.g_permutations()
    import numpy as np

    out = {}
    for n in module.degrees():
        idxs = module.by_degree.get(n, [])
        mat = np.zeros((len(idxs), len(idxs)), dtype="uint8")
        for loc, k in enumerate(idxs):
            mat[idxs.index(perms[gen_index][k]), loc] = 1
        out[n] = Gf2Matrix.from_dense(mat)
    return out


def test_coproduct_equivariance_g_basis_and_t_discrepancy():
    """Delta g = (g (x) g) Delta holds exactly; the literal t-basis
    analogue fails (t = 1 + g is not group-like)."""
    x = simplicial_circle()
    aw = aw_coproduct(x)
    module = aw.module
    cx = aw.complex
    pg = _permutation_blocks(module, 0)
    g_ok = True
    t_fails = False
    for n in cx.degrees():
        for p in cx.degrees():
            q = n - p
            if q < cx.lo or q > cx.hi:
                continue
            blk = aw.block(n, p, q)
            if not (blk @ pg[n]) == (pg[p].kron(pg[q]) @ blk):
                g_ok = False
            tn, tp, tq = module.tmap(1, n), module.tmap(1, p), module.tmap(1, q)
            if not (blk @ tn) == (tp.kron(tq) @ blk):
                t_fails = True
    assert g_ok
    assert t_fails


def test_cochain_algebra_shapes():
    dual, mul = cochain_algebra(simplicial_circle())
    assert dual.lo == -1 and dual.hi == 0
    assert dual.dim(0) == 4 and dual.dim(-1) == 4
    assert (0, 0) in mul and (0, -1) in mul
