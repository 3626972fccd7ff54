import pytest

from cleftlab.fileformat import (serialize_structure, load_structure, parse_structure, ParseError,
                                 UnresolvedBindingError, DimensionMismatchError)
from cleftlab.gallery import GALLERY_IDS
from cleftlab.hopf import validate_hopf_algebroid
from cleftlab.suites import run_suite
from conftest import gallery


@pytest.mark.parametrize("p", [None, 5])
@pytest.mark.parametrize("ident", GALLERY_IDS + ("sweedler",))
def test_round_trip_is_byte_identical(ident, p):
    text = serialize_structure(gallery(ident, p))
    loaded = load_structure(text)
    assert serialize_structure(loaded) == text
    assert validate_hopf_algebroid(loaded["hopf"]).ok


def test_loaded_g3_passes_cleft_suite():
    inst = load_structure(serialize_structure(gallery("G3")))
    assert run_suite(inst, "cleft").ok


def test_loaded_g5_passes_crossed_round_trip_suite():
    inst = load_structure(serialize_structure(gallery("G5")))
    assert run_suite(inst, "crossed-roundtrip").ok


def test_comments_and_spacing_do_not_change_canonical_form(tmp_path):
    text = serialize_structure(gallery("G1"))
    noisy = "# a comment\n\n" + "\n".join("  " + line.replace(" ", "   ") + "   # note"
                                           for line in text.splitlines()) + "\n"
    path = tmp_path / "g1.txt"
    path.write_text(noisy)
    assert serialize_structure(load_structure(str(path))) == text


def replace_line(text, prefix, new):
    lines = text.splitlines()
    k = next(i for i, line in enumerate(lines) if line.startswith(prefix))
    lines[k] = new
    return "\n".join(lines) + "\n", k + 1


def test_malformed_scalar_reports_position():
    text = serialize_structure(gallery("G3"))
    bad, lineno = replace_line(text, "row S 0 ", "row S 0 1/0 0")
    with pytest.raises(ParseError) as err:
        load_structure(bad)
    assert err.value.line == lineno and err.value.column == 9
    assert "1/0" in str(err.value)


def test_header_is_required():
    with pytest.raises(ParseError):
        load_structure("field q\n")
    with pytest.raises(ParseError):
        load_structure("cleftlab-structure 2\nfield q\n")
    with pytest.raises(ParseError):
        load_structure("cleftlab-structure 1\nfield fp:6\n")


def test_unresolved_bindings():
    text = serialize_structure(gallery("G3"))
    with pytest.raises(UnresolvedBindingError):
        load_structure(text.replace("bind j j\n", "bind j missing\n"))
    with pytest.raises(UnresolvedBindingError):
        load_structure(text.replace("bind S S\n", ""))
    with pytest.raises(UnresolvedBindingError):
        load_structure(text.replace("row S 0 ", "row T 0 ", 1))


def test_dimension_mismatches():
    text = serialize_structure(gallery("G4"))
    bad, _ = replace_line(text, "row S 0 ", "row S 0 1 0 0")
    with pytest.raises(DimensionMismatchError):
        load_structure(bad)
    with pytest.raises(DimensionMismatchError):
        load_structure(text.replace("bind s_L s_L\n", "bind s_L S\n"))
    lines = [line for line in text.splitlines() if not line.startswith("row eps_L 1 ")]
    with pytest.raises(DimensionMismatchError):
        load_structure("\n".join(lines) + "\n")


def test_error_classes_are_distinct():
    classes = {ParseError, UnresolvedBindingError, DimensionMismatchError}
    for a in classes:
        for b in classes - {a}:
            assert not issubclass(a, b)


def test_parse_keeps_names():
    doc = parse_structure(serialize_structure(gallery("G1")))
    assert set(doc.bindings) >= {"H", "L", "R", "S", "A", "j"}
