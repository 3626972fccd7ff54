"""Named check suites over loaded or built-in instances.

An instance is a dict as returned by ``build_gallery`` or
``load_structure``.  Each suite returns a Report, or None when the
instance carries no data the suite applies to.
"""
from .linalg import default_rng
from .report import Report

SUITE_NAMES = ("validate", "coinv", "galois", "cleft", "crossed", "gauge",
               "connection", "integral", "weak")
ALIASES = {"crossed-roundtrip": "crossed"}


def _has_cleft(inst):
    return inst.get("comodule_algebra") is not None and inst.get("j") is not None


def _cleft(inst):
    from .convolution import CleftExtension
    return CleftExtension(inst["comodule_algebra"], inst["eta_L"], inst["j"],
                          inst.get("j_inv"), name=inst.get("id", ""))


def _strict_cocycle(inst):
    """The instance's cocycle, or the one extracted from its cleft data."""
    from .crossed import crossed_from_cleft
    if inst.get("cocycle") is not None:
        return inst["cocycle"]
    if _has_cleft(inst):
        C = _cleft(inst)
        if C.j_inv is not None:
            return crossed_from_cleft(C)[0]
    return None


def suite_validate(inst, rng):
    from .hopf import validate_hopf_algebroid
    rep = Report("validate")
    rep.extend(validate_hopf_algebroid(inst["hopf"]), "Hopf algebroid")
    if inst.get("comodule_algebra") is not None:
        from .comodule import validate_comodule_algebra
        rep.extend(validate_comodule_algebra(inst["comodule_algebra"]), "comodule algebra")
    if inst.get("cocycle") is not None:
        from .crossed import validate_cocycle
        rep.extend(validate_cocycle(inst["cocycle"]), "cocycle")
    if inst.get("weak_cocycle") is not None:
        from .weak import validate_weak_cocycle
        rep.extend(validate_weak_cocycle(inst["weak_cocycle"]), "weak cocycle")
    return rep


def suite_coinv(inst, rng):
    if inst.get("comodule_algebra") is None:
        return None
    from .comodule import check_coinvariant_inclusion
    CA = inst["comodule_algebra"]
    rep = Report("coinv")
    rep.expect("coinvariants form a subalgebra", CA.B is not None,
               detail="dimension %d" % CA.B_space.dim)
    rep.extend(check_coinvariant_inclusion(CA.comodule), "inclusion")
    eta_L = inst.get("eta_L")
    if eta_L is not None:
        rep.expect_none("eta_L lands in the coinvariants",
                        ((l,) for l in range(eta_L.ncols) if not CA.B_space.contains(eta_L.col(l))))
    return rep


def suite_galois(inst, rng):
    if inst.get("comodule_algebra") is None or inst.get("eta_L") is None:
        return None
    from .convolution import galois_normal_basis_side
    _, rep = galois_normal_basis_side(inst["comodule_algebra"], inst["eta_L"])
    out = Report("galois")
    return out.extend(rep)


def suite_cleft(inst, rng):
    if not _has_cleft(inst):
        return None
    from .convolution import verify_cleft, galois_normal_basis_side
    rep = Report("cleft")
    C = _cleft(inst)
    r = verify_cleft(C)
    rep.extend(r, "cleaving map")
    galois, _ = galois_normal_basis_side(C.CA, C.eta_L)
    rep.expect("cleft iff Galois with normal basis", r.ok == galois,
               detail="cleft %s, Galois with normal basis %s" % (r.ok, galois))
    return rep


def suite_crossed(inst, rng):
    from .crossed import (build_crossed_product, extract_measuring_cocycle, cleft_from_crossed,
                          crossed_from_cleft, check_equivalence, same_cocycle)
    from .convolution import verify_cleft
    rep = Report("crossed")
    C = inst.get("cocycle")
    if C is not None:
        P = build_crossed_product(C, Hd=inst["hopf"], check=False)
        rep.extend(P.report, "crossed product")
        C3, r = extract_measuring_cocycle(C.bgd, C.B, C.measuring.iota, P.A)
        rep.extend(r, "extract")
        rep.expect("extraction returns the measuring and cocycle",
                   C3.measuring.action == C.measuring.action and C3.sigma == C.sigma)
        if P.comodule_algebra is not None:
            Cl = cleft_from_crossed(P)
            rep.extend(verify_cleft(Cl, lemmas=False), "cleft from crossed")
            if Cl.j_inv is not None:
                C4 = crossed_from_cleft(Cl)[0]
                e = check_equivalence(C, C4)
                rep.expect("round trip is gauge equivalent", e.status == "equivalent",
                           detail="by " + e.method)
        return rep
    if not _has_cleft(inst):
        return None
    Cl = _cleft(inst)
    if Cl.j_inv is None:
        rep.add("cleaving map invertible", "fail")
        return rep
    Coc, P, kappa, r = crossed_from_cleft(Cl)
    rep.extend(r, "crossed from cleft")
    Cl2 = cleft_from_crossed(build_crossed_product(Coc, Hd=inst["hopf"], check=False))
    rep.extend(verify_cleft(Cl2, lemmas=False), "cleft from crossed")
    Coc2 = crossed_from_cleft(Cl2)[0]
    e = check_equivalence(Coc, Coc2)
    rep.expect("round trip is gauge equivalent", e.status == "equivalent", detail="by " + e.method)
    return rep


def suite_gauge(inst, rng, trials=3):
    from .crossed import random_gauge_map, gauge_transform, check_equivalence, is_gauge_between
    C = _strict_cocycle(inst)
    if C is None:
        return None
    rep = Report("gauge")
    for t in range(trials):
        chi = random_gauge_map(C, rng)
        if not rep.expect("gauge map %d sampled" % t, chi is not None):
            continue
        g = gauge_transform(C, chi)
        rep.extend(g.report, "transform %d" % t)
        e = check_equivalence(C, g.cocycle)
        rep.expect("transform %d recognized as equivalent" % t, e.status == "equivalent",
                   detail="by " + e.method)
        if e.chi is not None:
            rep.expect("transform %d certificate" % t, is_gauge_between(C, g.cocycle, e.chi))
    return rep


def suite_connection(inst, rng):
    if not _has_cleft(inst):
        return None
    from .connection import canonical_strong_connection, classify_strong_connections
    rep = Report("connection")
    C = _cleft(inst)
    if C.j_inv is None:
        rep.add("cleaving map invertible", "fail")
        return rep
    ctx, ell, r = canonical_strong_connection(C)
    rep.extend(r, "canonical")
    rep.extend(classify_strong_connections(ctx, ell=ell), "classification")
    return rep


def suite_integral(inst, rng):
    if not _has_cleft(inst):
        return None
    from .connection import (base_field_context, base_ring_context, solve_integrals,
                             integral_section_correspondence, separable_integral, check_integral,
                             t_flatness_map, chern_galois_preconditions, preconditions_verdict,
                             relative_injectivity_check)
    rep = Report("integral")
    C = _cleft(inst)
    if C.j_inv is None:
        rep.add("cleaving map invertible", "fail")
        return rep
    for label, ctx in (("T = k", base_field_context(C)), ("T = L", base_ring_context(C))):
        sol = solve_integrals(ctx)
        if not rep.expect("%s: total integral exists" % label, sol is not None):
            continue
        rep.extend(integral_section_correspondence(ctx, theta=sol[0]), label)
        if ctx.separability is not None:
            rep.extend(check_integral(ctx, separable_integral(ctx)), label + ": separable integral")
        fm = t_flatness_map(ctx)
        rep.expect("%s: flatness map is an isomorphism" % label, fm.iso)
        if ctx.separability is not None:
            v = preconditions_verdict(chern_galois_preconditions(ctx))
            rep.expect("%s: Chern-Galois preconditions" % label, v == "satisfied", detail=v)
    rep.extend(relative_injectivity_check(C.CA), "relative injectivity")
    return rep


def suite_weak(inst, rng):
    from . import weak
    rep = Report("weak")
    applied = False
    C = inst.get("cocycle")
    if C is not None:
        applied = True
        W = weak.strict_as_weak(C)
        rep.extend(weak.validate_weak_cocycle(W), "downgraded cocycle")
        P = weak.build_weak_crossed_product(W, Hd=inst["hopf"], check=False)
        rep.extend(P.report, "downgraded crossed product")
        rep.expect("downgraded corner is everything", P.corner.dim == P.space.dim)
    W = inst.get("weak_cocycle")
    if W is not None:
        applied = True
        rep.extend(weak.validate_weak_cocycle(W), "weak cocycle")
        P = weak.build_weak_crossed_product(W, Hd=inst["hopf"], check=False)
        rep.extend(P.report, "weak crossed product")
        if P.report.ok:
            rep.expect("corner is proper", P.corner.dim < P.space.dim,
                       detail="%d of %d" % (P.corner.dim, P.space.dim))
            inv = W.sigma_inv if W.sigma_inv is not None else weak.weak_cocycle_inverse(W)
            if inv is not None:
                # the cleft side needs an invertible weak cocycle
                P = weak.build_weak_crossed_product(W.with_inverse(inv), Hd=inst["hopf"], check=False)
                _, r = weak.weak_cleft_crossed_correspondence(P)
                rep.extend(r, "correspondence")
    if _has_cleft(inst):
        applied = True
        Cw = weak.weak_cleft_data(inst["comodule_algebra"], inst["eta_L"], inst["j"])
        rep.extend(weak.verify_weak_cleft(Cw), "downgraded cleft data")
        v = weak.weak_cleft_equivalence(inst["comodule_algebra"], inst["eta_L"], rng=rng)
        rep.extend(v.report, "characterization")
    return rep if applied else None


SUITES = {
    "validate": suite_validate,
    "coinv": suite_coinv,
    "galois": suite_galois,
    "cleft": suite_cleft,
    "crossed": suite_crossed,
    "gauge": suite_gauge,
    "connection": suite_connection,
    "integral": suite_integral,
    "weak": suite_weak,
}


def resolve_suites(name):
    """Suite names in declaration order for a name, an alias or ``all``."""
    if name in (None, "all"):
        return list(SUITE_NAMES)
    name = ALIASES.get(name, name)
    if name not in SUITES:
        raise KeyError("unknown suite %r" % name)
    return [name]


def run_suite(inst, name, seed=0):
    """Run one suite; returns a Report titled ``<id> <suite>`` or None if not applicable."""
    name = ALIASES.get(name, name)
    rep = SUITES[name](inst, default_rng(seed))
    if rep is not None:
        rep.title = ("%s %s" % (inst.get("id", ""), name)).strip()
    return rep
