import pytest

from cleftlab.algebra import pure_terms
from cleftlab.comodule import (ComoduleAlgebra, validate_comodule_algebra, validate_hopf_comodule,
                               canonical_map, base_comodule_algebra, regular_comodule_algebra,
                               check_coinvariant_inclusion, is_comodule_map, comodule_map_equations,
                               antipode_flip_comodule, antipode_flip_back, validate_left_hopf_comodule)
from cleftlab.linalg import Matrix, solve_matrix_equations
from conftest import gallery
import oracle

# (dim A, dim B, dim of A (x)_R H) per instance; coinvariant dimensions are
# nullities of rho_R - (id (x) 1) and canonical-map ranks recomputed by the
# Fraction oracle below.
FROZEN = {"G1": (2, 1, 4), "G2": (4, 2, 8), "G3": (4, 2, 8), "G4": (4, 2, 8),
          "G5": (4, 1, 16), "sweedler": (8, 2, 32)}


@pytest.mark.parametrize("ident", sorted(FROZEN))
def test_comodule_algebra_validates(ident):
    CA = gallery(ident)["comodule_algebra"]
    assert validate_comodule_algebra(CA).ok
    assert validate_hopf_comodule(CA.comodule).ok


@pytest.mark.parametrize("ident", sorted(FROZEN))
def test_coinvariant_dimension_matches_oracle(ident):
    CA = gallery(ident)["comodule_algebra"]
    dA, dB, dAH = FROZEN[ident]
    C = CA.comodule.over_R
    unit = Matrix.from_columns(CA.field, C.MH.dim, [C.MH.project(pure_terms(CA.A.basis(m), CA.Hd.H.unit))
                                                    for m in range(CA.A.dim)])
    D = C.coaction - unit
    assert CA.A.dim == dA
    assert CA.B_space.dim == dB == oracle.nullity(oracle.to_plain(CA.field, D.rows), D.ncols)
    assert CA.B is not None and CA.B.dim == dB


@pytest.mark.parametrize("ident", sorted(FROZEN))
def test_canonical_map_bijective(ident):
    CA = gallery(ident)["comodule_algebra"]
    can = canonical_map(CA)
    assert can.matrix.nrows == FROZEN[ident][2]
    assert can.bijective
    assert oracle.matrix_rank(CA.field, can.matrix) == FROZEN[ident][2]


def test_trivial_coaction_is_not_galois():
    CA = base_comodule_algebra(gallery("G1")["hopf"])
    assert validate_comodule_algebra(CA).ok
    can = canonical_map(CA)
    assert (can.matrix.nrows, can.matrix.ncols) == (2, 1)
    assert not can.bijective


@pytest.mark.parametrize("ident", ["G2", "G4", "G5"])
def test_coinvariant_inclusion(ident):
    CA = gallery(ident)["comodule_algebra"]
    assert check_coinvariant_inclusion(CA.comodule).ok


def test_perturbed_coaction_rejected():
    CA = gallery("G4")["comodule_algebra"]
    rho = CA.comodule.rho_R.copy()
    rho.rows[0][0] += 1
    bad = ComoduleAlgebra(CA.Hd, CA.A, CA.eta_R, rho, CA.comodule.rho_L)
    rep = validate_comodule_algebra(bad)
    assert not rep.ok and rep.failures


def test_identity_is_comodule_map_and_solves_equations():
    CA = gallery("G3")["comodule_algebra"]
    M = CA.comodule.over_R
    ident = Matrix.identity(CA.field, M.dim)
    assert is_comodule_map(ident, CA.comodule, CA.comodule).ok
    eqs = comodule_map_equations(M, M)
    sol = solve_matrix_equations(CA.field, M.dim, M.dim, eqs)
    assert sol is not None
    from cleftlab.linalg import equation_residual
    assert all(x == 0 for x in equation_residual(eqs, ident))
    # the scaled identity is a comodule map, twice the identity is not a solution of f = id
    assert not all(x == 0 for x in equation_residual(eqs + [([(None, None)], ident)], ident.scale(2)))


@pytest.mark.parametrize("ident", ["G2", "G4", "sweedler"])
def test_antipode_flip_round_trip(ident):
    CA = regular_comodule_algebra(gallery(ident)["hopf"])
    left = antipode_flip_back(CA.comodule)
    assert validate_left_hopf_comodule(left).ok
    back = antipode_flip_comodule(left)
    assert validate_hopf_comodule(back).ok
    assert back.rho_R == CA.comodule.rho_R and back.rho_L == CA.comodule.rho_L
