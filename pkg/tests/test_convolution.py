import pytest

from cleftlab.comodule import base_comodule_algebra, canonical_map
from cleftlab.convolution import (CleftExtension, verify_cleft, normal_basis_maps, cleft_from_galois_nb,
                                  find_normal_basis_iso, galois_normal_basis_side, solve_convolution_inverse,
                                  is_convolution_inverse, splitting_map, normalize, left_handed_kappa,
                                  opposite_cleft, ConvolutionError)
from cleftlab.linalg import Matrix
from conftest import gallery

CLEFT = ["G1-regular", "G3", "G5", "G2", "G4", "sweedler"]


def cleft(ident, p=None):
    g = gallery(ident, p)
    return CleftExtension(g["comodule_algebra"], g["eta_L"], g["j"])


@pytest.mark.parametrize("p", [None, 5])
@pytest.mark.parametrize("ident", CLEFT)
def test_cleft_implies_galois_with_normal_basis(ident, p):
    C = cleft(ident, p)
    assert verify_cleft(C).ok
    assert canonical_map(C.CA).bijective
    nb = normal_basis_maps(C)
    assert nb.ok
    assert nb.kappa @ nb.nu == Matrix.identity(C.field, nb.space.dim)


@pytest.mark.parametrize("p", [None, 5])
@pytest.mark.parametrize("ident", CLEFT)
def test_galois_with_searched_normal_basis_implies_cleft(ident, p):
    g = gallery(ident, p)
    found, kappa, how = find_normal_basis_iso(g["comodule_algebra"], g["eta_L"])
    assert found, how
    C = cleft_from_galois_nb(g["comodule_algebra"], g["eta_L"], kappa)
    assert verify_cleft(C).ok


def test_trivial_coaction_fails_both_sides():
    Hd = gallery("G1")["hopf"]
    CA = base_comodule_algebra(Hd)
    eta_L = Matrix.identity(Hd.field, 1)
    verdict, rep = galois_normal_basis_side(CA, eta_L)
    assert verdict is False
    assert rep.status_of("canonical map bijective") == "fail"
    with pytest.raises(ConvolutionError):
        cleft_from_galois_nb(CA, eta_L, Matrix(Hd.field, 2, 1))
    # no cleaving map: the only right colinear maps H -> A vanish on g - 1
    j = Matrix(Hd.field, 1, 2, [[1, 1]])
    assert not verify_cleft(CleftExtension(CA, eta_L, j)).ok


def test_perturbed_cleaving_map_rejected_with_witness():
    g = gallery("G3")
    j = g["j"].copy()
    j.rows[1][0] += 1
    rep = verify_cleft(CleftExtension(g["comodule_algebra"], g["eta_L"], j))
    assert not rep.ok
    assert any(c.witness is not None for c in rep.failures)


@pytest.mark.parametrize("ident", CLEFT)
def test_inverse_unique_and_two_sided(ident):
    C = cleft(ident)
    part, ker = solve_convolution_inverse(C.j, "left")
    assert ker == [] and part.matrix == C.j_inv.matrix
    assert is_convolution_inverse(C.j, C.j_inv, "both")


@pytest.mark.parametrize("ident", ["G3", "G5", "sweedler"])
def test_splitting_and_normalization(ident):
    C = cleft(ident)
    s = splitting_map(C)
    for b in C.CA.B_space.basis:
        assert s.apply(b) == b
    N = normalize(C)
    assert N.jv(C.Hd.H.unit) == C.A.unit
    assert verify_cleft(N).ok


@pytest.mark.parametrize("ident", ["G2", "G4", "G5"])
def test_left_handed_normal_basis_and_opposite(ident):
    C = cleft(ident)
    kappa, HB, rep = left_handed_kappa(C)
    assert rep.ok
    assert verify_cleft(opposite_cleft(C)).ok
