import io
import json
import subprocess
import sys
import time

import pytest

from cleftlab.cli import main
from cleftlab.fileformat import serialize_structure
from conftest import gallery


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def cli(*argv):
    return subprocess.run([sys.executable, "-m", "cleftlab", *argv], capture_output=True, text=True)


@pytest.fixture
def g3_file(tmp_path):
    path = tmp_path / "g3.txt"
    path.write_text(serialize_structure(gallery("G3")))
    return path


def test_gallery_lists_ids():
    code, out = run("gallery")
    assert code == 0 and "G4-weak" in out.split()


def test_serialize_round_trip_through_cli(tmp_path):
    code, out = run("gallery", "G5", "--serialize")
    assert code == 0
    path = tmp_path / "g5.txt"
    path.write_text(out)
    code, again = run("report", str(path), "--suite", "validate")
    assert code == 0
    assert serialize_structure(gallery("G5")) == out


@pytest.mark.parametrize("verb", ["validate", "coinv", "galois", "cleft", "crossed", "gauge",
                                  "connection", "integral", "weak"])
def test_verbs_pass_on_g3_file(verb, g3_file):
    code, out = run(verb, str(g3_file))
    assert code == 0, out
    assert out.splitlines()[-1].endswith("0 failed, 0 undetermined")


def test_crossed_round_trip_suite_on_g5():
    code, out = run("report", "G5", "--suite", "crossed-roundtrip")
    assert code == 0


def test_structured_output_mirrors_text(g3_file):
    _, text = run("cleft", str(g3_file), "--witnesses")
    _, structured = run("cleft", str(g3_file), "--format", "structured", "--witnesses")
    text_checks = [l for l in text.splitlines() if l.startswith("[")]
    records = [json.loads(l) for l in structured.splitlines()]
    checks = [r for r in records if "check" in r]
    assert len(checks) == len(text_checks)
    for line, rec in zip(text_checks, checks):
        assert line.startswith("[%s]" % rec["status"]) and rec["check"] in line
    assert records[-1]["summary"]["failed"] == 0


def test_failure_exit_code_and_witness(tmp_path):
    text = serialize_structure(gallery("G4"))
    lines = text.splitlines()
    k = next(i for i, l in enumerate(lines) if l.startswith("row S 1 "))
    assert lines[k] != "row S 1 1 1 1 1"
    lines[k] = "row S 1 1 1 1 1"
    path = tmp_path / "bad_antipode.txt"
    path.write_text("\n".join(lines) + "\n")
    code, out = run("validate", str(path), "--witnesses")
    assert code == 1
    assert "[fail]" in out and "witness=" in out


def test_input_error_exit_codes(tmp_path, g3_file):
    bad = tmp_path / "bad.txt"
    bad.write_text(g3_file.read_text().replace("row S 0 1 0", "row S 0 1/0 0", 1))
    assert run("validate", str(bad))[0] == 2
    assert run("validate", str(tmp_path / "missing.txt"))[0] == 2
    assert run("validate", "G1", "--field", "fp:4")[0] == 2
    assert run("report", "G1", "--suite", "nope")[0] == 2
    assert run("gallery", "G9", "--suite", "all")[0] == 2
    assert run("cleft", "G4-weak")[0] == 2  # suite does not apply
    assert run("frobnicate")[0] == 2
    assert run("validate", str(g3_file), "--field", "fp:5")[0] == 2


def test_subprocess_exit_codes(g3_file):
    assert cli("cleft", str(g3_file)).returncode == 0
    r = cli("validate", "nowhere.txt")
    assert r.returncode == 2 and "error" in r.stderr


def test_report_order_is_declaration_order():
    _, out = run("report", "G5", "--suite", "all", "--jobs", "3")
    titles = [l[2:] for l in out.splitlines() if l.startswith("# ") and not l.startswith("# summary")]
    assert titles == ["G5 %s" % s for s in ("validate", "coinv", "galois", "cleft", "crossed", "gauge",
                                            "connection", "integral", "weak")]
    _, serial = run("report", "G5", "--suite", "all", "--jobs", "1")
    assert serial == out


def test_full_gallery_suite_under_five_minutes():
    start = time.time()
    r = cli("gallery", "--suite", "all")
    elapsed = time.time() - start
    assert r.returncode == 0, r.stdout[-2000:]
    assert elapsed < 300
