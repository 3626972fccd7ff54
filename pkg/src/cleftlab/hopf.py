"""Hopf algebroids: a left and a right bialgebroid on one algebra plus an antipode."""
import itertools

from .algebra import TensorSpace, expand, is_zero, sub_vec, pure_terms, add_terms, check_algebra_map
from .bialgebroid import (validate_left_bialgebroid, validate_right_bialgebroid, co_opposite,
                          opposite_bgd)
from .linalg import Matrix, solve_unknown_map
from .report import Report


class HopfAlgebroid:
    def __init__(self, left, right, antipode, antipode_inverse=None, name=""):
        if left.side != "left" or right.side != "right":
            raise TypeError("need a left and a right bialgebroid")
        self.left = left
        self.right = right
        self.H = left.H
        self.field = self.H.field
        self.S = antipode
        self.S_inv = antipode_inverse if antipode_inverse is not None else antipode.inverse()
        self.name = name
        n = self.H.dim
        lgap = (left.right_act, left.left_act)
        rgap = (right.right_act, right.left_act)
        # H (x)_L H (x)_R H and H (x)_R H (x)_L H
        self.H_LR = TensorSpace(self.field, [n, n, n], [lgap, rgap])
        self.H_RL = TensorSpace(self.field, [n, n, n], [rgap, lgap])

    @property
    def L(self):
        return self.left.base

    @property
    def R(self):
        return self.right.base

    @property
    def bijective(self):
        return self.S_inv is not None

    def antipode(self, v):
        return self.S.apply(v)

    def antipode_inv(self, v):
        if self.S_inv is None:
            raise ValueError("antipode is not bijective")
        return self.S_inv.apply(v)

    def s_L(self, v):
        return self.left.s.apply(v)

    def t_L(self, v):
        return self.left.t.apply(v)

    def s_R(self, v):
        return self.right.s.apply(v)

    def t_R(self, v):
        return self.right.t.apply(v)

    def pi_L(self, v):
        return self.left.counit.apply(v)

    def pi_R(self, v):
        return self.right.counit.apply(v)

    def with_antipode(self, S):
        return HopfAlgebroid(self.left, self.right, S, name=self.name)


def _antipode_residuals(left, right, S_apply):
    """Residual vectors of the bilinearity and antipode identities for S."""
    H, L, R = left.H, left.base, right.base
    e = H.basis
    n = H.dim
    out = []
    for l, h, r in itertools.product(range(L.dim), range(n), range(R.dim)):
        x = H.mul_many(left.t_img[l], e(h), right.t_img[r])
        lhs = S_apply(x)
        rhs = H.mul_many(right.s_img[r], S_apply(e(h)), left.s_img[l])
        out.append(((l, h, r), sub_vec(lhs, rhs)))
    for h in range(n):
        acc = H.zero()
        for (a, b), c in left.delta(h).items():
            acc = [x + c * y for x, y in zip(acc, H.mul(S_apply(e(a)), e(b)))]
        out.append(((h,), sub_vec(acc, right.s.apply(right.counit.apply(e(h))))))
    for h in range(n):
        acc = H.zero()
        for (a, b), c in right.delta(h).items():
            acc = [x + c * y for x, y in zip(acc, H.mul(e(a), S_apply(e(b))))]
        out.append(((h,), sub_vec(acc, left.s.apply(left.counit.apply(e(h))))))
    return out


def validate_hopf_algebroid(Hd, include_bialgebroids=True):
    rep = Report("Hopf algebroid " + Hd.name)
    left, right = Hd.left, Hd.right
    H, L, R = Hd.H, Hd.L, Hd.R
    n = H.dim
    e = H.basis
    if include_bialgebroids:
        rep.extend(validate_left_bialgebroid(left), "left")
        rep.extend(validate_right_bialgebroid(right), "right")
    rep.expect("same total algebra", left.H.same_as(right.H))
    # base map compatibilities
    rep.expect("s_L pi_L t_R = t_R", left.s @ left.counit @ right.t == right.t)
    rep.expect("t_L pi_L s_R = s_R", left.t @ left.counit @ right.s == right.s)
    rep.expect("s_R pi_R t_L = t_L", right.s @ right.counit @ left.t == left.t)
    rep.expect("t_R pi_R s_L = s_L", right.t @ right.counit @ left.s == left.s)

    def colin_1():
        for h in range(n):
            a = expand(right.delta(h), [left.delta, None])
            b = expand(left.delta(h), [None, right.delta])
            if not is_zero(sub_vec(Hd.H_LR.project(a), Hd.H_LR.project(b))):
                yield (h,)

    def colin_2():
        for h in range(n):
            a = expand(left.delta(h), [right.delta, None])
            b = expand(right.delta(h), [None, left.delta])
            if not is_zero(sub_vec(Hd.H_RL.project(a), Hd.H_RL.project(b))):
                yield (h,)

    rep.expect_none("left coproduct right colinear", colin_1())
    rep.expect_none("right coproduct left colinear", colin_2())
    res = _antipode_residuals(left, right, Hd.S.apply)
    nb = L.dim * n * R.dim
    rep.expect_none("antipode bilinear", (w for w, v in res[:nb] if not is_zero(v)))
    rep.expect_none("antipode left identity", (w for w, v in res[nb:nb + n] if not is_zero(v)))
    rep.expect_none("antipode right identity", (w for w, v in res[nb + n:] if not is_zero(v)))
    if Hd.S_inv is not None:
        I = Matrix.identity(Hd.field, n)
        rep.expect("antipode inverse", Hd.S @ Hd.S_inv == I and Hd.S_inv @ Hd.S == I)
    rep.extend(derived_checks(Hd), "derived")
    return rep


def derived_checks(Hd):
    rep = Report("derived")
    left, right = Hd.left, Hd.right
    H, L, R = Hd.H, Hd.L, Hd.R
    n = H.dim
    e = H.basis
    S = Hd.S.apply

    def bilin_2():
        for r, h, l in itertools.product(range(R.dim), range(n), range(L.dim)):
            lhs = S(H.mul_many(right.t_img[r], e(h), left.t_img[l]))
            rhs = H.mul_many(left.s_img[l], S(e(h)), right.s_img[r])
            if lhs != rhs:
                yield (r, h, l)

    rep.expect_none("second antipode bilinearity", bilin_2())
    rep.extend(check_algebra_map(H, H, Hd.S, anti=True), "antipode")

    def anti_comult_L():
        for h in range(n):
            flipped = {}
            for (a, b), c in right.delta(h).items():
                add_terms(flipped, pure_terms(S(e(b)), S(e(a))), c)
            if left.coproduct.apply(S(e(h))) != left.HH.project(flipped):
                yield (h,)

    def anti_comult_R():
        for h in range(n):
            flipped = {}
            for (a, b), c in left.delta(h).items():
                add_terms(flipped, pure_terms(S(e(b)), S(e(a))), c)
            if right.coproduct.apply(S(e(h))) != right.HH.project(flipped):
                yield (h,)

    rep.expect_none("antipode anti-comultiplicative (left coproduct)", anti_comult_L())
    rep.expect_none("antipode anti-comultiplicative (right coproduct)", anti_comult_R())
    u = right.counit @ left.t   # L^op -> R
    v = left.counit @ right.s   # R -> L^op
    rep.expect("pi_R t_L and pi_L s_R inverse",
               u @ v == Matrix.identity(Hd.field, R.dim) and v @ u == Matrix.identity(Hd.field, L.dim))
    rep.extend(check_algebra_map(L, R, u, anti=True), "pi_R t_L")
    rep.extend(check_algebra_map(R, L, v, anti=True), "pi_L s_R")
    return rep


class AntipodeNotUnique(RuntimeError):
    pass


def solve_antipode(left, right):
    """The unique S making (left, right, S) a Hopf algebroid, or None."""
    n = left.H.dim

    def residual(X):
        return [x for _, v in _antipode_residuals(left, right, X.apply) for x in v]

    sol = solve_unknown_map(left.field, n, n, residual)
    if sol is None:
        return None
    S, ker = sol
    if ker:
        raise AntipodeNotUnique("antipode system has a %d-dimensional kernel" % len(ker))
    return S


def hopf_op_cop(Hd):
    return HopfAlgebroid(opposite_bgd(co_opposite(Hd.right)), opposite_bgd(co_opposite(Hd.left)),
                         Hd.S, Hd.S_inv, name=Hd.name + "^op_cop")


def hopf_cop(Hd):
    if Hd.S_inv is None:
        raise ValueError("co-opposite Hopf algebroid needs a bijective antipode")
    return HopfAlgebroid(co_opposite(Hd.left), co_opposite(Hd.right), Hd.S_inv, Hd.S,
                         name=Hd.name + "_cop")


def hopf_op(Hd):
    if Hd.S_inv is None:
        raise ValueError("opposite Hopf algebroid needs a bijective antipode")
    return HopfAlgebroid(opposite_bgd(Hd.right), opposite_bgd(Hd.left), Hd.S_inv, Hd.S,
                         name=Hd.name + "^op")


def derived_structures(Hd):
    """The op_cop variant always; cop and op when the antipode is bijective."""
    out = {"op_cop": hopf_op_cop(Hd)}
    if Hd.S_inv is not None:
        out["cop"] = hopf_cop(Hd)
        out["op"] = hopf_op(Hd)
    return out
