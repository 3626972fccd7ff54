import itertools
import random

import pytest

from cleftlab.convolution import CleftExtension, verify_cleft
from cleftlab.crossed import (Cocycle, validate_cocycle, solve_cocycle_inverse, validate_cocycle_inverse,
                              check_inverse_lemmas, build_crossed_product, extract_measuring_cocycle,
                              crossed_from_cleft, cleft_from_crossed, check_equivalence, gauge_transform,
                              random_gauge_map, is_gauge_between, classify_cleaving_maps, same_cocycle,
                              CrossedProductError)
from cleftlab.gallery import twisted_klein
from cleftlab.linalg import Field, Matrix
from conftest import gallery

F5 = Field(5)


@pytest.mark.parametrize("p", [None, 5])
@pytest.mark.parametrize("ident", ["G3", "G5", "sweedler"])
def test_build_then_extract_is_identity(ident, p):
    g = gallery(ident, p)
    C = g["cocycle"]
    assert validate_cocycle(C).ok
    P = build_crossed_product(C, Hd=g["hopf"])
    C2, rep = extract_measuring_cocycle(C.bgd, C.B, C.measuring.iota, P.A)
    assert rep.ok
    assert C2.measuring.action == C.measuring.action
    assert C2.sigma == C.sigma


@pytest.mark.parametrize("ident", ["G1-regular", "G2", "G3", "G4", "G5"])
def test_cleft_crossed_round_trip_is_gauge_equivalent(ident):
    g = gallery(ident)
    C = CleftExtension(g["comodule_algebra"], g["eta_L"], g["j"])
    coc, P, iso, rep = crossed_from_cleft(C)
    assert rep.ok
    back = cleft_from_crossed(build_crossed_product(coc, Hd=g["hopf"]))
    assert verify_cleft(back).ok
    coc2 = crossed_from_cleft(back)[0]
    e = check_equivalence(coc, coc2)
    assert e.status == "equivalent"
    assert is_gauge_between(coc, coc2, e.chi)


def test_g5_inverse_laws_on_all_basis_triples():
    C = gallery("G5")["cocycle"]
    H, B = C.H, C.B
    S = solve_cocycle_inverse(C)
    assert validate_cocycle_inverse(C, S).ok
    C = C.with_inverse(S)
    n = H.dim
    triples = list(itertools.product(range(n), repeat=3))
    assert len(triples) == 64 and B.dim == 1
    # grouplike basis and B = k: the identities are scalar equations
    mul = lambda a, b: H.table[a][b].index(1)
    s = lambda a, b: C.sig(a, b)[0]
    t = lambda a, b: C.sig_inv(a, b)[0]
    unit = H.unit.index(1)
    for h in range(n):
        assert s(unit, h) == s(h, unit) == t(unit, h) == t(h, unit) == 1
    for h, k, m in triples:
        assert s(k, m) == s(h, k) * s(mul(h, k), m) * t(h, mul(k, m))
        assert t(k, m) == s(h, mul(k, m)) * t(mul(h, k), m) * t(h, k)
    assert check_inverse_lemmas(C).ok


def test_broken_cocycle_rejected():
    C = gallery("G5", 5)["cocycle"]
    S = C.sigma.copy()
    S.rows[0][5] += 1
    rep = validate_cocycle(Cocycle(C.measuring, S))
    assert not rep.ok
    assert rep.failures[0].witness is not None
    with pytest.raises(CrossedProductError):
        build_crossed_product(Cocycle(C.measuring, S))


@pytest.mark.parametrize("ident", ["G1-regular", "G5"])
def test_random_gauge_transforms_are_recognized(ident):
    g = gallery(ident, 5)
    C = g.get("cocycle")
    if C is None:
        C = crossed_from_cleft(CleftExtension(g["comodule_algebra"], g["eta_L"], g["j"]))[0]
    rng = random.Random(11)
    for _ in range(20):
        chi = random_gauge_map(C, rng)
        gt = gauge_transform(C, chi)
        assert gt.report.ok
        e = check_equivalence(C, gt.cocycle)
        assert e.status == "equivalent"
        assert is_gauge_between(C, gt.cocycle, e.chi)


@pytest.mark.parametrize("p", [None, 5])
def test_trivial_and_bicharacter_klein_cocycles_inequivalent(p):
    F = Field(p)
    _, C1, _ = twisted_klein(F, twisted=False)
    _, C2, _ = twisted_klein(F, twisted=True)
    assert check_equivalence(C1, C2).status == "inequivalent"
    assert check_equivalence(C1, C1).status == "equivalent"


def test_classify_cleaving_maps_recovers_scaling():
    g = gallery("G3")
    C = CleftExtension(g["comodule_algebra"], g["eta_L"], g["j"])
    chi, rep = classify_cleaving_maps(C, g["j"].scale(2))
    assert rep.ok and chi is not None
    assert classify_cleaving_maps(C, Matrix(C.field, C.A.dim, C.Hd.H.dim))[0] is None


def test_same_cocycle_detects_difference():
    _, C1, _ = twisted_klein(Field(), twisted=False)
    _, C2, _ = twisted_klein(Field(), twisted=True)
    assert same_cocycle(C1, C1) and not same_cocycle(C1, C2)
