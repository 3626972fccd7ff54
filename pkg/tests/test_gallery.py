import pytest

from cleftlab.gallery import build_gallery, GALLERY_IDS
from cleftlab.hopf import validate_hopf_algebroid
from cleftlab.linalg import Field, FieldError
from cleftlab.suites import SUITE_NAMES, run_suite, resolve_suites
from conftest import gallery


@pytest.mark.parametrize("ident", GALLERY_IDS + ("sweedler",))
def test_instances_validate(ident):
    assert validate_hopf_algebroid(gallery(ident)["hopf"]).ok


def test_illegal_parameters():
    with pytest.raises(ValueError):
        build_gallery("G1", Field(), n=0)
    with pytest.raises(FieldError):
        build_gallery("G1", Field(6))
    with pytest.raises(KeyError):
        build_gallery("G9")


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_cyclic_orders(n):
    Hd = gallery("G1", None, n)["hopf"]
    assert Hd.H.dim == n and validate_hopf_algebroid(Hd).ok


@pytest.mark.parametrize("p", [None, 5])
@pytest.mark.parametrize("ident", GALLERY_IDS)
def test_every_applicable_suite_passes(ident, p):
    inst = gallery(ident, p)
    ran = 0
    for name in SUITE_NAMES:
        rep = run_suite(inst, name)
        if rep is not None:
            ran += 1
            assert rep.ok, (name, [c.name for c in rep.failures])
    assert ran >= 2


def test_suite_names():
    assert resolve_suites("all") == list(SUITE_NAMES)
    assert resolve_suites("crossed-roundtrip") == ["crossed"]
    with pytest.raises(KeyError):
        resolve_suites("nope")


def test_weak_instance_only_has_weak_suites():
    inst = gallery("G4-weak")
    assert run_suite(inst, "cleft") is None
    assert run_suite(inst, "weak").ok
