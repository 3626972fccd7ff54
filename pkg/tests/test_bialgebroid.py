import itertools

import pytest

from cleftlab.bialgebroid import (validate_left_bialgebroid, validate_right_bialgebroid, validate_coring,
                                  LeftBialgebroid, co_opposite, opposite_bgd)
from cleftlab.linalg import Matrix
from conftest import gallery
import oracle


@pytest.mark.parametrize("ident", ["G1", "G2", "G4", "G3", "G5"])
def test_both_bialgebroids_validate(ident):
    Hd = gallery(ident)["hopf"]
    assert validate_left_bialgebroid(Hd.left).ok
    assert validate_right_bialgebroid(Hd.right).ok


def test_side_mismatch_is_rejected():
    Hd = gallery("G2")["hopf"]
    with pytest.raises(TypeError):
        validate_left_bialgebroid(Hd.right)


def test_takeuchi_space_dimension_matches_oracle():
    # H (x)_L H for G2 = L (x) L^op with L the dual numbers: dim 16 - rank of balancing relations
    B = gallery("G2")["hopf"].left
    n, d = B.H.dim, B.base.dim
    rels = []
    for p in range(d):
        for i, j in itertools.product(range(n), repeat=2):
            v = [0] * (n * n)
            for a, c in enumerate(B.right_act[p].col(i)):
                v[a * n + j] += c
            for b, c in enumerate(B.left_act[p].col(j)):
                v[i * n + b] -= c
            rels.append(v)
    expected = n * n - oracle.rank(oracle.to_plain(B.field, rels), n * n)
    assert B.HH.dim == expected == 8


def test_broken_counit_fails_with_witness():
    B = gallery("G4")["hopf"].left
    eps = B.counit.copy()
    eps.rows[0][1] += 1
    bad = LeftBialgebroid(B.H, B.base, B.s, B.t, B.coproduct, eps)
    rep = validate_left_bialgebroid(bad)
    assert not rep.ok
    assert any(c.witness is not None for c in rep.failures)


def test_broken_coproduct_fails():
    B = gallery("G1", 5)["hopf"].left
    D = B.coproduct.copy()
    D.rows[0][1] += 1
    bad = LeftBialgebroid(B.H, B.base, B.s, B.t, D, B.counit)
    assert not validate_left_bialgebroid(bad).ok


def test_co_opposite_and_opposite_are_bialgebroids():
    Hd = gallery("G2")["hopf"]
    assert validate_left_bialgebroid(co_opposite(Hd.left)).ok
    assert validate_right_bialgebroid(opposite_bgd(Hd.left)).ok
