import random

import pytest

from cleftlab.connection import (SubalgebraContext, base_field_context, base_ring_context, solve_separability,
                                 check_separability, validate_context, canonical_strong_connection,
                                 check_strong_connection, classify_strong_connections, f_family,
                                 solve_strong_connections, solve_integrals, check_integral,
                                 integral_section_correspondence, separable_integral, t_flatness_map,
                                 chern_galois_preconditions, preconditions_verdict, relative_injectivity_check,
                                 connection_to_f, f_to_connection)
from cleftlab.convolution import CleftExtension
from cleftlab.linalg import random_combination
from conftest import gallery


def cleft(ident, p=None):
    g = gallery(ident, p)
    return CleftExtension(g["comodule_algebra"], g["eta_L"], g["j"])


def contexts(C):
    out = [base_field_context(C)]
    B = SubalgebraContext(C, C.CA.B_space.basis, name="T = B")
    B.separability = solve_separability(B)
    if B.separability is not None and B.T.dim > 1:
        out.append(B)
    return out


def test_g3_coinvariants_are_separable_split():
    C = cleft("G3")
    ctxs = contexts(C)
    assert [c.T.dim for c in ctxs] == [1, 2]
    assert check_separability(ctxs[1]).ok


@pytest.mark.parametrize("p", [None, 5])
@pytest.mark.parametrize("ident", ["G3", "G5"])
def test_connection_and_integral_suite(ident, p):
    C = cleft(ident, p)
    ctx, ell, rep = canonical_strong_connection(C)
    assert rep.ok
    assert classify_strong_connections(ctx, ell=ell).ok
    for cx in contexts(C):
        assert validate_context(cx).ok
        sol = solve_integrals(cx)
        assert sol is not None
        assert integral_section_correspondence(cx, theta=sol[0]).ok
        assert check_integral(cx, separable_integral(cx)).ok
        fm = t_flatness_map(cx)
        assert fm.iso
        assert preconditions_verdict(chern_galois_preconditions(cx)) == "satisfied"
    assert relative_injectivity_check(C.CA).ok


@pytest.mark.parametrize("ident", ["G3", "G5"])
def test_random_connection_data_round_trip(ident):
    C = cleft(ident, 5)
    ctx = base_ring_context(C)
    part, ker = f_family(ctx)
    rng = random.Random(3)
    for _ in range(20):
        f = random_combination(C.field, part, ker, rng)
        assert classify_strong_connections(ctx, f=f).ok
        ell = f_to_connection(ctx, f)
        assert check_strong_connection(ctx, ell).ok
        assert connection_to_f(ctx, ell) == f


@pytest.mark.parametrize("ident", ["G3", "G5", "G4"])
def test_connection_space_matches_f_family(ident):
    C = cleft(ident)
    ctx = base_ring_context(C)
    direct = solve_strong_connections(ctx)
    fam = f_family(ctx)
    assert direct is not None and fam is not None
    assert len(direct[1]) == len(fam[1])


def test_perturbed_connection_rejected():
    C = cleft("G5")
    ctx, ell, _ = canonical_strong_connection(C)
    bad = ell.copy()
    bad.rows[0][0] += 1
    assert not check_strong_connection(ctx, bad).ok


def test_non_separable_base_is_undetermined_for_flatness():
    ctx = base_ring_context(cleft("G2"))
    assert ctx.separability is None
    assert preconditions_verdict(chern_galois_preconditions(ctx)) == "undetermined"
