"""Acceptance criteria, one test each.

Every test records its outcome through ``record_criterion``; the terminal
summary then prints one PASS/FAIL line per criterion.
"""
import io
import itertools
import random
import subprocess
import sys
import time
from contextlib import contextmanager

from cleftlab.cli import main
from cleftlab.comodule import canonical_map
from cleftlab.connection import (SubalgebraContext, base_field_context, base_ring_context,
                                 canonical_strong_connection, check_integral, check_separability,
                                 check_strong_connection, classify_strong_connections, connection_to_f,
                                 f_family, f_to_connection, integral_section_correspondence,
                                 relative_injectivity_check, separable_integral, solve_integrals,
                                 solve_separability, t_flatness_map, validate_context)
from cleftlab.convolution import (CleftExtension, cleft_from_galois_nb, find_normal_basis_iso, normal_basis_maps,
                                  verify_cleft)
from cleftlab.crossed import (Cocycle, build_crossed_product, check_equivalence, check_gauge_map,
                              check_inverse_lemmas, cleft_from_crossed, crossed_from_cleft,
                              extract_measuring_cocycle, gauge_transform, is_gauge_between, random_gauge_map,
                              solve_cocycle_inverse, validate_cocycle, validate_cocycle_inverse)
from cleftlab.fileformat import load_structure, serialize_structure
from cleftlab.gallery import GALLERY_IDS, twisted_klein
from cleftlab.hopf import solve_antipode, validate_hopf_algebroid
from cleftlab.linalg import Field, Matrix, random_combination
from cleftlab.weak import (WeakCocycle, build_weak_crossed_product, compose_pairs, identity_pair, inverse_pair,
                           left_unit, right_unit, same_weak_cocycle, strict_as_weak, validate_weak_cocycle,
                           weak_cocycle_inverse, weak_equivalence, weak_gauge)

import fuzz
from conftest import gallery

QQ, F5 = Field(), Field(5)


@contextmanager
def criterion(record, number, title):
    """Record PASS only if the block finishes without an assertion error."""
    outcome = {"ok": False, "detail": ""}
    try:
        yield outcome
        outcome["ok"] = True
    finally:
        record(number, title, outcome["ok"], outcome["detail"])


def cleft(ident, p=None):
    g = gallery(ident, p)
    return CleftExtension(g["comodule_algebra"], g["eta_L"], g["j"])


def test_criterion_01_hopf_algebroids_validate(record_criterion):
    with criterion(record_criterion, 1, "Hopf algebroid axioms and derived checks on G1(n=2,3), G2, G4"):
        for (ident, n), p in itertools.product([("G1", 2), ("G1", 3), ("G2", 2), ("G4", 2)], [None, 5]):
            rep = validate_hopf_algebroid(gallery(ident, p, n)["hopf"])
            assert rep.ok, (ident, n, p, rep.failures)
            assert any(c.name.startswith("derived:") for c in rep.checks)


def test_criterion_02_antipode_solver(record_criterion):
    with criterion(record_criterion, 2, "antipode solver: group inverse, flip, agreement with supplied"):
        Hd = gallery("G1", None, 3)["hopf"]
        inverse = Matrix.from_columns(QQ, 3, [[1 if k == (-i) % 3 else 0 for k in range(3)] for i in range(3)])
        assert solve_antipode(Hd.left, Hd.right) == inverse
        Hd = gallery("G2")["hopf"]
        d = Hd.L.dim
        flip = Matrix.from_columns(QQ, d * d, [[1 if k == (h % d) * d + h // d else 0 for k in range(d * d)]
                                               for h in range(d * d)])
        assert solve_antipode(Hd.left, Hd.right) == flip
        for ident, p in itertools.product(["G1", "G2", "G3", "G4", "G5", "sweedler"], [None, 5]):
            Hd = gallery(ident, p)["hopf"]
            assert solve_antipode(Hd.left, Hd.right) == Hd.S, (ident, p)


def test_criterion_03_cleft_iff_galois_normal_basis(record_criterion):
    with criterion(record_criterion, 3, "cleft iff Galois with normal basis, both directions"):
        for ident, p in itertools.product(["G1-regular", "G3", "G5"], [None, 5]):
            C = cleft(ident, p)
            assert verify_cleft(C).ok
            assert canonical_map(C.CA).bijective
            assert normal_basis_maps(C).ok
            # the converse starts from a normal basis found without j
            found, kappa, _ = find_normal_basis_iso(C.CA, C.eta_L)
            assert found
            assert verify_cleft(cleft_from_galois_nb(C.CA, C.eta_L, kappa)).ok


def test_criterion_04_crossed_product_round_trips(record_criterion):
    with criterion(record_criterion, 4, "build/extract identity and cleft-crossed-cleft equivalence"):
        for ident, p in itertools.product(["G3", "G5"], [None, 5]):
            g = gallery(ident, p)
            C = g["cocycle"]
            P = build_crossed_product(C, Hd=g["hopf"])
            C2, rep = extract_measuring_cocycle(C.bgd, C.B, C.measuring.iota, P.A)
            assert rep.ok
            assert C2.measuring.action == C.measuring.action and C2.sigma == C.sigma
            coc, _, _, rep = crossed_from_cleft(cleft(ident, p))
            assert rep.ok
            back = cleft_from_crossed(build_crossed_product(coc, Hd=g["hopf"]))
            assert verify_cleft(back).ok
            e = check_equivalence(coc, crossed_from_cleft(back)[0])
            assert e.status == "equivalent" and e.chi is not None


def test_criterion_05_gauge_equivalence(record_criterion):
    with criterion(record_criterion, 5, "random gauge transforms recognized; Klein pair inequivalent"):
        for ident in ("G1-regular", "G5"):
            g = gallery(ident, 5)
            C = g["cocycle"] if g.get("cocycle") is not None else crossed_from_cleft(cleft(ident, 5))[0]
            rng = random.Random(2024)
            for _ in range(20):
                chi = random_gauge_map(C, rng)
                gt = gauge_transform(C, chi)
                assert gt.report.ok
                e = check_equivalence(C, gt.cocycle)
                assert e.status == "equivalent"
                assert is_gauge_between(C, gt.cocycle, e.chi)
        _, trivial, _ = twisted_klein(QQ, twisted=False)
        _, bichar, _ = twisted_klein(QQ, twisted=True)
        assert check_equivalence(trivial, bichar).status == "inequivalent"


def test_criterion_06_cocycle_inverse_identities(record_criterion):
    with criterion(record_criterion, 6, "inverse cocycle identities and normalization on all 64 triples"):
        C = gallery("G5")["cocycle"]
        H = C.H
        S = solve_cocycle_inverse(C)
        assert validate_cocycle_inverse(C, S).ok
        C = C.with_inverse(S)
        mul = lambda a, b: H.table[a][b].index(1)
        s = lambda a, b: C.sig(a, b)[0]
        t = lambda a, b: C.sig_inv(a, b)[0]
        unit = H.unit.index(1)
        triples = list(itertools.product(range(H.dim), repeat=3))
        assert len(triples) == 64
        for h in range(H.dim):
            assert s(unit, h) == s(h, unit) == t(unit, h) == t(h, unit) == 1
        for h, k, m in triples:
            assert t(k, m) == s(h, mul(k, m)) * t(mul(h, k), m) * t(h, k)
            assert s(k, m) == s(h, k) * s(mul(h, k), m) * t(h, mul(k, m))
        assert check_inverse_lemmas(C).ok


def test_criterion_07_connections_and_integrals(record_criterion):
    with criterion(record_criterion, 7, "strong connections and integrals on G3, G5 (T = k, T = B)"):
        for ident, p in itertools.product(["G3", "G5"], [None, 5]):
            C = cleft(ident, p)
            ctx, ell, rep = canonical_strong_connection(C)
            assert rep.ok
            assert classify_strong_connections(ctx, ell=ell).ok
            contexts = [base_field_context(C)]
            if ident == "G3":
                B = SubalgebraContext(C, C.CA.B_space.basis, name="T = B")
                B.separability = solve_separability(B)
                assert B.T.dim == 2 and check_separability(B).ok
                contexts.append(B)
            for cx in contexts:
                assert validate_context(cx).ok
                sol = solve_integrals(cx)
                assert sol is not None
                assert integral_section_correspondence(cx, theta=sol[0]).ok
                assert check_integral(cx, separable_integral(cx)).ok
                assert t_flatness_map(cx).iso
            assert relative_injectivity_check(C.CA).ok
        for ident in ("G3", "G5"):
            C = cleft(ident, 5)
            ctx = base_ring_context(C)
            part, ker = f_family(ctx)
            rng = random.Random(7)
            for _ in range(20):
                f = random_combination(C.field, part, ker, rng)
                assert classify_strong_connections(ctx, f=f).ok
                ell = f_to_connection(ctx, f)
                assert check_strong_connection(ctx, ell).ok
                assert connection_to_f(ctx, ell) == f


BUILD_FAILURES = {"associativity", "y~ sigma(1, h) = h . 1", "preunit: e a = a e", "preunit: a e = a e e"}


def test_criterion_08_weak_crossed_products(record_criterion):
    with criterion(record_criterion, 8, "weak: downgrade, proper corner, perturbations fire, gauge groupoid") as out:
        for ident in ("G3", "G5", "sweedler"):
            g = gallery(ident)
            W = strict_as_weak(g["cocycle"])
            assert validate_weak_cocycle(W).ok
            P = build_weak_crossed_product(W, Hd=g["hopf"])
            assert P.report.ok and P.corner.dim == P.space.dim
        g = gallery("G4-weak")
        W = g["weak_cocycle"]
        assert validate_weak_cocycle(W).ok
        P = build_weak_crossed_product(W, Hd=g["hopf"])
        assert P.report.ok and P.corner.dim < P.space.dim
        # broken weak cocycle axioms show up in the build as associativity or preunit failures
        C = gallery("G5", 5)["cocycle"]
        Ws = strict_as_weak(C)
        rng = random.Random(7)
        fired = 0
        for _ in range(12):
            S = fuzz.bump(C.sigma, rng)
            W2 = WeakCocycle(Cocycle(C.measuring, S), Ws.x, Ws.x_tilde)
            names = {c.name for c in build_weak_crossed_product(W2, check=False).report.failures}
            fired += (not validate_weak_cocycle(W2).ok) and bool(names & BUILD_FAILURES)
        out["detail"] = "%d of 12 perturbations fired" % fired
        assert fired >= 10
        # gauge pairs act as a groupoid
        chi = random_gauge_map(C, random.Random(1))
        inv, _ = check_gauge_map(C, chi)
        q = (chi, inv)
        p = (chi.scale(F5(2)), inv.scale(1 / F5(2)))
        g2 = weak_gauge(Ws, *p)
        assert g2.report.ok
        W2 = g2.weak
        idp = identity_pair(Ws)
        assert same_weak_cocycle(weak_gauge(Ws, *idp).weak, Ws)
        assert compose_pairs(Ws, p, right_unit(Ws, p)) == p
        assert left_unit(Ws, p) == identity_pair(W2)
        assert compose_pairs(Ws, left_unit(Ws, p), p) == p
        back = weak_gauge(W2, *inverse_pair(p))
        assert back.report.ok and same_weak_cocycle(back.weak, Ws)
        W3 = weak_gauge(W2, *q).weak
        assert same_weak_cocycle(weak_gauge(Ws, *compose_pairs(Ws, q, p)).weak, W3)
        assert weak_equivalence(Ws, W3).status == "equivalent"
        assert weak_cocycle_inverse(W) is None


def test_criterion_09_perturbations_rejected_with_witness(record_criterion):
    with criterion(record_criterion, 9, "single-entry perturbations over F5 rejected with witness") as out:
        rates = {}
        for name, target in fuzz.TARGETS.items():
            rejected, counted, agreed, valid_seen = fuzz.run_trials(target, trials=200, seed=0)
            assert counted == 200, name
            # perturbations an independent route calls valid must be accepted
            assert agreed == valid_seen, name
            rates[name] = rejected / counted
        out["detail"] = "min rate %.3f over %d validators" % (min(rates.values()), len(rates))
        assert all(r >= 0.95 for r in rates.values()), rates


def run_cli(*argv):
    buf = io.StringIO()
    return main(list(argv), out=buf), buf.getvalue()


def test_criterion_10_files_and_cli(record_criterion, tmp_path):
    with criterion(record_criterion, 10, "byte-identical round trip, exit codes, gallery suite under 5 min") as out:
        for ident, p in itertools.product(GALLERY_IDS, [None, 5]):
            text = serialize_structure(gallery(ident, p))
            assert serialize_structure(load_structure(text)) == text, (ident, p)
        g3 = tmp_path / "g3.txt"
        g3.write_text(serialize_structure(gallery("G3")))
        assert run_cli("validate", str(g3))[0] == 0
        lines = serialize_structure(gallery("G4")).splitlines()
        k = next(i for i, line in enumerate(lines) if line.startswith("row S 1 "))
        lines[k] = "row S 1 1 1 1 1"
        bad = tmp_path / "bad_antipode.txt"
        bad.write_text("\n".join(lines) + "\n")
        code, text = run_cli("validate", str(bad), "--witnesses")
        assert code == 1 and "witness=" in text
        broken = tmp_path / "broken.txt"
        broken.write_text(g3.read_text().replace("row S 0 1 0", "row S 0 1/0 0", 1))
        assert run_cli("validate", str(broken))[0] == 2
        start = time.time()
        r = subprocess.run([sys.executable, "-m", "cleftlab", "gallery", "--suite", "all"],
                           capture_output=True, text=True)
        elapsed = time.time() - start
        out["detail"] = "gallery suite %.1f s" % elapsed
        assert r.returncode == 0, r.stdout[-2000:]
        assert elapsed < 300
