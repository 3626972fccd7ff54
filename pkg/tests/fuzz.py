"""Single-entry perturbation harness for the validators.

Each target takes a random.Random and returns ``(report, still_valid)``:
the validator's report on a structure with exactly one matrix entry
changed by a nonzero scalar, and whether an independent route says the
perturbed structure is still valid (None when no such route is used, in
which case the trial always counts).  A counted trial is rejected when
the report fails and at least one failing check carries a witness.
"""
import random

from cleftlab.algebra import Algebra, validate_algebra
from cleftlab.bialgebroid import (LeftBialgebroid, RightBialgebroid, validate_left_bialgebroid,
                                  validate_right_bialgebroid)
from cleftlab.comodule import ComoduleAlgebra, validate_comodule_algebra
from cleftlab.connection import (base_field_context, canonical_strong_connection, check_integral,
                                 check_strong_connection, solve_integrals)
from cleftlab.convolution import CleftExtension, verify_cleft
from cleftlab.crossed import Cocycle, Measuring, validate_cocycle, validate_cocycle_inverse, validate_measuring
from cleftlab.hopf import HopfAlgebroid, validate_hopf_algebroid
from cleftlab.convolution import _inverse_residual
from cleftlab.connection import _theta_equations
from cleftlab.linalg import Field, _residual_system, equation_residual
from cleftlab.weak import _cleaving_residual
from cleftlab.weak import WeakCocycle, validate_weak_cocycle, verify_weak_cleft, weak_cleft_data

import oracle
from conftest import gallery

F5 = Field(5)


def bump(matrix, rng):
    """Copy of a matrix with one entry shifted by a nonzero scalar."""
    M = matrix.copy()
    i, k = rng.randrange(M.nrows), rng.randrange(M.ncols)
    M.rows[i][k] += F5.random(rng, nonzero=True)
    return M


def algebra_target(rng):
    H = gallery("G5", 5)["hopf"].H
    table = [[list(v) for v in row] for row in H.table]
    i, j, k = (rng.randrange(H.dim) for _ in range(3))
    table[i][j][k] += F5.random(rng, nonzero=True)
    return validate_algebra(Algebra(F5, H.dim, table, H.unit))


def _bialgebroid(B, rng, cls):
    which = rng.choice(("coproduct", "counit", "source", "target"))
    # the coproduct goes in as ambient terms so it survives a change of the balanced tensor square
    parts = {"source": B.s, "target": B.t, "coproduct": B.delta, "counit": B.counit}
    if which == "coproduct":
        bad = bump(B.coproduct, rng)
        parts["coproduct"] = lambda h: B.HH.lift(bad.col(h))
    else:
        parts[which] = bump(parts[which], rng)
    return cls(B.H, B.base, parts["source"], parts["target"], parts["coproduct"], parts["counit"])


def left_bialgebroid_target(rng):
    B = gallery("G4", 5)["hopf"].left
    return validate_left_bialgebroid(_bialgebroid(B, rng, LeftBialgebroid))


def right_bialgebroid_target(rng):
    B = gallery("G4", 5)["hopf"].right
    return validate_right_bialgebroid(_bialgebroid(B, rng, RightBialgebroid))


def hopf_target(rng):
    Hd = gallery("G4", 5)["hopf"]
    bad = HopfAlgebroid(Hd.left, Hd.right, bump(Hd.S, rng), Hd.S_inv)
    return validate_hopf_algebroid(bad, include_bialgebroids=False)


def comodule_algebra_target(rng):
    CA = gallery("G3", 5)["comodule_algebra"]
    rho_R, rho_L = CA.comodule.rho_R, CA.comodule.rho_L
    if rng.random() < 0.5:
        rho_R = bump(rho_R, rng)
    else:
        rho_L = bump(rho_L, rng)
    return validate_comodule_algebra(ComoduleAlgebra(CA.Hd, CA.A, CA.eta_R, rho_R, rho_L))


def _invertible(j):
    """Solvability of the convolution-inverse system, decided by the reference eliminator."""
    ctx = j.ctx
    A, r0 = _residual_system(ctx.field, ctx.A.dim, ctx.H.dim, _inverse_residual(j, "both"))
    rhs = oracle.to_plain(ctx.field, [[-x for x in r0]])[0]
    return oracle.solvable(oracle.to_plain(ctx.field, A.rows), rhs, A.ncols, ctx.field.p)


def cleft_target(rng):
    g = gallery("G3", 5)
    C = CleftExtension(g["comodule_algebra"], g["eta_L"], bump(g["j"], rng))
    linear = all(x == 0 for x in _cleaving_residual(C.CA, C.eta_L)(C.j.matrix))
    return verify_cleft(C), linear and _invertible(C.j)


def measuring_target(rng):
    M = gallery("G5", 5)["cocycle"].measuring
    action = list(M.action)
    h = rng.randrange(len(action))
    action[h] = bump(action[h], rng)
    return validate_measuring(Measuring(M.bgd, M.B, M.iota, action))


def cocycle_target(rng):
    C = gallery("G5", 5)["cocycle"]
    return validate_cocycle(Cocycle(C.measuring, bump(C.sigma, rng)))


def cocycle_inverse_target(rng):
    C = gallery("G5", 5)["cocycle"]
    return validate_cocycle_inverse(C, bump(C.sigma_inv, rng))


def weak_cocycle_target(rng):
    W = gallery("G4-weak", 5)["weak_cocycle"]
    return validate_weak_cocycle(WeakCocycle(Cocycle(W.measuring, bump(W.cocycle.sigma, rng)),
                                             W.x, W.x_tilde))


def weak_cleft_target(rng):
    g = gallery("G4", 5)
    C = _weak_cleft(g)
    return verify_weak_cleft(weak_cleft_data(C.CA, C.eta_L, C.j.matrix, bump(C.j_inv.matrix, rng)))


_WEAK = {}


def _weak_cleft(g):
    if "G4" not in _WEAK:
        _WEAK["G4"] = weak_cleft_data(g["comodule_algebra"], g["eta_L"], g["j"])
    return _WEAK["G4"]


_CONN = {}


def _connection():
    if not _CONN:
        g = gallery("G5", 5)
        C = CleftExtension(g["comodule_algebra"], g["eta_L"], g["j"], g.get("j_inv"))
        ctx, ell, _ = canonical_strong_connection(C)
        kctx = base_field_context(C)
        _CONN.update(ctx=ctx, ell=ell, kctx=kctx, theta=solve_integrals(kctx)[0])
    return _CONN


def strong_connection_target(rng):
    c = _connection()
    return check_strong_connection(c["ctx"], bump(c["ell"], rng))


def integral_target(rng):
    c = _connection()
    theta = bump(c["theta"], rng)
    valid = all(x == 0 for x in equation_residual(_theta_equations(c["kctx"]), theta))
    return check_integral(c["kctx"], theta), valid


TARGETS = {
    "algebra": algebra_target,
    "left bialgebroid": left_bialgebroid_target,
    "right bialgebroid": right_bialgebroid_target,
    "Hopf algebroid": hopf_target,
    "comodule algebra": comodule_algebra_target,
    "cleft extension": cleft_target,
    "measuring": measuring_target,
    "cocycle": cocycle_target,
    "cocycle inverse": cocycle_inverse_target,
    "weak cocycle": weak_cocycle_target,
    "weak cleft extension": weak_cleft_target,
    "strong connection": strong_connection_target,
    "total integral": integral_target,
}


def run_trials(target, trials=200, seed=0, max_draws=2000):
    """Draw perturbations until ``trials`` invalid ones were seen.

    Returns ``(rejected, counted, agreements, valid_seen)``: rejections
    with a witness among counted trials, the number counted, how many
    still-valid perturbations the validator accepted, and how many
    still-valid perturbations were drawn.
    """
    rng = random.Random(seed)
    rejected = counted = agree = valid_seen = 0
    for _ in range(max_draws):
        if counted == trials:
            break
        out = target(rng)
        rep, valid = out if isinstance(out, tuple) else (out, None)
        if valid:
            valid_seen += 1
            agree += rep.ok
            continue
        counted += 1
        rejected += (not rep.ok) and any(c.witness is not None for c in rep.failures)
    return rejected, counted, agree, valid_seen
