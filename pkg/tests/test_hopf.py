import pytest

from cleftlab.hopf import (HopfAlgebroid, validate_hopf_algebroid, solve_antipode, derived_structures)
from cleftlab.linalg import Matrix
from conftest import gallery

DERIVED = ("derived: second antipode bilinearity", "derived: antipode: anti-multiplicative",
           "derived: antipode anti-comultiplicative (left coproduct)",
           "derived: antipode anti-comultiplicative (right coproduct)",
           "derived: pi_R t_L and pi_L s_R inverse")


@pytest.mark.parametrize("ident,n", [("G1", 2), ("G1", 3), ("G2", 2), ("G4", 2)])
@pytest.mark.parametrize("p", [None, 5])
def test_axiom_suite_passes(ident, n, p):
    rep = validate_hopf_algebroid(gallery(ident, p, n)["hopf"])
    assert rep.ok, rep.failures
    for name in DERIVED:
        assert rep.status_of(name) == "pass"


def test_g1_dimensions_and_involutive_antipode():
    Hd = gallery("G1", None, 2)["hopf"]
    assert Hd.H.dim == 2
    assert Hd.S @ Hd.S == Matrix.identity(Hd.field, 2)


def test_g2_dimension():
    assert gallery("G2")["hopf"].H.dim == 4


def test_g4_base_is_split_separable():
    Hd = gallery("G4")["hopf"]
    R = Hd.R
    assert Hd.H.dim == 4 and R.dim == 2
    assert R.is_commutative()
    # two orthogonal idempotents summing to 1: R is k x k
    e0, e1 = R.basis(0), R.basis(1)
    assert R.mul(e0, e0) == e0 and R.mul(e1, e1) == e1 and R.mul(e0, e1) == R.zero()
    assert [a + b for a, b in zip(e0, e1)] == R.unit
    # separability idempotent e0 (x) e0 + e1 (x) e1: central and multiplies to 1
    for r in range(2):
        t = R.basis(r)
        assert [R.mul(t, e0), R.mul(t, e1)] == [R.mul(e0, t), R.mul(e1, t)]


def test_solve_antipode_g1_order_three_is_group_inverse():
    Hd = gallery("G1", None, 3)["hopf"]
    S = solve_antipode(Hd.left, Hd.right)
    inverse = Matrix.from_columns(Hd.field, 3, [[1 if k == (-i) % 3 else 0 for k in range(3)]
                                                 for i in range(3)])
    assert S == inverse == Hd.S


def test_solve_antipode_g2_is_flip():
    Hd = gallery("G2")["hopf"]
    S = solve_antipode(Hd.left, Hd.right)
    d = Hd.L.dim
    flip = Matrix.from_columns(Hd.field, d * d, [[1 if k == (h % d) * d + h // d else 0
                                                  for k in range(d * d)] for h in range(d * d)])
    assert S == flip


@pytest.mark.parametrize("ident", ["G1", "G2", "G3", "G4", "G5", "sweedler"])
def test_solver_agrees_with_supplied_antipode(ident):
    Hd = gallery(ident)["hopf"]
    assert solve_antipode(Hd.left, Hd.right) == Hd.S


def test_broken_antipode_rejected():
    Hd = gallery("G4")["hopf"]
    bad = HopfAlgebroid(Hd.left, Hd.right, Matrix.identity(Hd.field, 4), name="bad")
    rep = validate_hopf_algebroid(bad)
    assert not rep.ok
    assert "antipode left identity" in [c.name for c in rep.failures] or \
           "antipode right identity" in [c.name for c in rep.failures]


@pytest.mark.parametrize("ident", ["G2", "G4", "sweedler"])
def test_derived_structures_validate(ident):
    for name, D in derived_structures(gallery(ident)["hopf"]).items():
        assert validate_hopf_algebroid(D).ok, name
