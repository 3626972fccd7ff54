"""Measurings, 2-cocycles, crossed products and gauge transformations.

Everything is relative to a left bialgebroid (H, L, s, t, coproduct, pi)
and an L-ring B with unit map iota.  A measuring is stored as one matrix
B -> B per basis element of H.  A cocycle is stored as a dim(B) x n^2
matrix on the ambient H (x)_k H, column h*n + k holding sigma(h, k); a
guard checks that it is balanced (right and left multiplication by t(l)),
so that it descends to the balanced tensor product.
"""
import itertools

from .algebra import (TensorSpace, algebra_from_function, validate_algebra, add_terms,
                      pure_terms, expand, check_algebra_map, sub_vec, is_zero)
from .comodule import Comodule, ComoduleAlgebra, validate_comodule
from .bialgebroid import mul_terms
from .convolution import (ConvContext, ConvolutionError, CleftExtension, normalize,
                          solve_convolution_inverse, normal_basis_maps, verify_cleft)
from .linalg import Matrix, solve_unknown_map, random_combination
from .report import Report


class CrossedProductError(ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


def iterated_coproduct(bgd, h, m):
    """Ambient terms of the (m-1)-fold coproduct of basis element h, as a list."""
    cache = bgd.__dict__.setdefault("_iterated", {})
    key = (h, m)
    if key not in cache:
        if m == 1:
            cache[key] = [((h,), bgd.field.one)]
        else:
            prev = dict(iterated_coproduct(bgd, h, m - 1))
            terms = expand(prev, [None] * (m - 2) + [bgd.delta])
            cache[key] = [(t, c) for t, c in terms.items() if c != 0]
    return cache[key]


def _acc(acc, v, c):
    for i, x in enumerate(v):
        if x != 0:
            acc[i] += c * x


class Measuring:
    def __init__(self, bgd, B, iota, action, name=""):
        self.bgd = bgd
        self.H = bgd.H
        self.B = B
        self.field = B.field
        self.iota = iota
        self.name = name
        if callable(action):
            action = [Matrix.from_columns(self.field, B.dim, [action(h, b) for b in range(B.dim)])
                      for h in range(self.H.dim)]
        self.action = list(action)

    def act(self, h, bvec):
        return self.action[h].apply(bvec)

    def act_matrix(self, hvec):
        out = Matrix(self.field, self.B.dim, self.B.dim)
        for h, c in enumerate(hvec):
            if c != 0:
                out = out + self.action[h].scale(c)
        return out

    def act_vec(self, hvec, bvec):
        out = self.B.zero()
        for h, c in enumerate(hvec):
            if c != 0:
                _acc(out, self.action[h].apply(bvec), c)
        return out

    def iota_of(self, lvec):
        return self.iota.apply(lvec)

    def iota_pi(self, hvec):
        return self.iota.apply(self.bgd.counit.apply(hvec))


class Cocycle:
    """A measuring together with a cocycle and, optionally, its inverse."""

    def __init__(self, measuring, sigma, sigma_inv=None, name=""):
        self.measuring = measuring
        self.name = name
        M = measuring
        n = M.H.dim

        def as_matrix(s):
            if s is None or isinstance(s, Matrix):
                return s
            return Matrix.from_columns(M.field, M.B.dim,
                                       [s(h, k) for h in range(n) for k in range(n)])
        self.sigma = as_matrix(sigma)
        self.sigma_inv = as_matrix(sigma_inv)

    @property
    def bgd(self):
        return self.measuring.bgd

    @property
    def B(self):
        return self.measuring.B

    @property
    def H(self):
        return self.measuring.H

    @property
    def field(self):
        return self.measuring.field

    def sig(self, h, k):
        return self.sigma.col(h * self.H.dim + k)

    def sig_inv(self, h, k):
        return self.sigma_inv.col(h * self.H.dim + k)

    def with_inverse(self, sigma_inv):
        return Cocycle(self.measuring, self.sigma, sigma_inv, name=self.name)


def pair_value(S, hvec, kvec, n, dim):
    """Bilinear extension of a matrix on the ambient H (x)_k H."""
    out = [S.field.zero] * dim
    for h, a in enumerate(hvec):
        if a == 0:
            continue
        for k, b in enumerate(kvec):
            if b != 0:
                _acc(out, S.col(h * n + k), a * b)
    return out


def trivial_cocycle(measuring):
    """sigma(h, k) = iota(pi(h k))."""
    H = measuring.H
    return Cocycle(measuring, lambda h, k: measuring.iota_pi(H.mul(H.basis(h), H.basis(k))),
                   name="trivial")


# ------------------------------------------------------------- validators

def check_measuring_linearity(M, rep):
    """The two L-linearity laws of a measuring."""
    H, B, bgd = M.H, M.B, M.bgd
    for which, imgs, side in (("source", bgd.s_img, "left"), ("target", bgd.t_img, "right")):
        def bad():
            for l, h in itertools.product(range(len(imgs)), range(H.dim)):
                lhs = M.act_matrix(H.mul(imgs[l], H.basis(h)))
                il = M.iota.col(l)
                rhs = (B.left_mul(il) if side == "left" else B.right_mul(il)) @ M.action[h]
                if lhs != rhs:
                    yield (l, h)
        rep.expect_none("measuring L-linear (%s)" % which, bad())


def check_measuring_multiplicative(M, rep):
    H, B, bgd = M.H, M.B, M.bgd

    def bad():
        for h in range(H.dim):
            for b, b2 in itertools.product(range(B.dim), repeat=2):
                lhs = M.act(h, B.table[b][b2])
                rhs = B.zero()
                for (x, y), c in bgd.delta(h).items():
                    _acc(rhs, B.mul(M.act(x, B.basis(b)), M.act(y, B.basis(b2))), c)
                if lhs != rhs:
                    yield (h, b, b2)
                    break
    rep.expect_none("measuring multiplicative", bad())


def validate_measuring(M):
    rep = Report("measuring " + M.name)
    rep.extend(check_algebra_map(M.bgd.base, M.B, M.iota, name="iota"), "iota")
    H = M.H
    rep.expect_none("h.1 = iota(pi(h))",
                    ((h,) for h in range(H.dim) if M.act(h, M.B.unit) != M.iota_pi(H.basis(h))))
    check_measuring_linearity(M, rep)
    check_measuring_multiplicative(M, rep)
    return rep


def check_sigma_balanced(C, S, over, rep, label="cocycle"):
    """S(h m(l), k) = S(h, m(l) k) where m is s or t."""
    H, bgd = C.H, C.bgd
    n, d = H.dim, C.B.dim
    imgs = bgd.t_img if over == "t" else bgd.s_img

    def bad():
        for l, h, k in itertools.product(range(len(imgs)), range(n), range(n)):
            lhs = pair_value(S, H.mul(H.basis(h), imgs[l]), H.basis(k), n, d)
            rhs = pair_value(S, H.basis(h), H.mul(imgs[l], H.basis(k)), n, d)
            if lhs != rhs:
                yield (l, h, k)
    rep.expect_none("%s balanced over %s" % (label, "L^op" if over == "t" else "L"), bad())


def check_sigma_module_laws(C, S, rep, label="cocycle"):
    """S(s(l)h, k) = iota(l) S(h, k) and S(t(l)h, k) = S(h, k) iota(l)."""
    H, B, bgd, M = C.H, C.B, C.bgd, C.measuring
    n, d = H.dim, B.dim

    def bad(imgs, side):
        for l, h, k in itertools.product(range(len(imgs)), range(n), range(n)):
            lhs = pair_value(S, H.mul(imgs[l], H.basis(h)), H.basis(k), n, d)
            v = S.col(h * n + k)
            il = M.iota.col(l)
            rhs = B.mul(il, v) if side == "left" else B.mul(v, il)
            if lhs != rhs:
                yield (l, h, k)
    rep.expect_none("%s left L-linear" % label, bad(bgd.s_img, "left"))
    rep.expect_none("%s right L-linear" % label, bad(bgd.t_img, "right"))


def check_cocycle_balance_b(C, rep):
    """(h1 . iota(l)) sigma(h2, k) = sigma(h, s(l) k)."""
    H, B, bgd, M = C.H, C.B, C.bgd, C.measuring
    n, d = H.dim, B.dim

    def bad():
        for l, h, k in itertools.product(range(bgd.base.dim), range(n), range(n)):
            lhs = B.zero()
            for (x, y), c in bgd.delta(h).items():
                _acc(lhs, B.mul(M.act(x, M.iota.col(l)), C.sig(y, k)), c)
            rhs = pair_value(C.sigma, H.basis(h), H.mul(bgd.s_img[l], H.basis(k)), n, d)
            if lhs != rhs:
                yield (l, h, k)
    rep.expect_none("cocycle compatible with the measuring on L", bad())


def check_normalized(C, S, rep, label="cocycle"):
    H = C.H
    n = H.dim
    d = C.B.dim
    M = C.measuring

    def bad():
        for h in range(n):
            ip = M.iota_pi(H.basis(h))
            if pair_value(S, H.unit, H.basis(h), n, d) != ip or pair_value(S, H.basis(h), H.unit, n, d) != ip:
                yield (h,)
    rep.expect_none("%s normalized" % label, bad())


def cocycle_identity_sides(C, h, k, m):
    """Both sides of the cocycle identity for basis elements h, k, m."""
    B, H, bgd, M = C.B, C.H, C.bgd, C.measuring
    n, d = H.dim, B.dim
    lhs = B.zero()
    for (h1, h2), a in bgd.delta(h).items():
        for (k1, k2), b in bgd.delta(k).items():
            for (m1, m2), c in bgd.delta(m).items():
                x = M.act(h1, C.sig(k1, m1))
                y = pair_value(C.sigma, H.basis(h2), H.table[k2][m2], n, d)
                _acc(lhs, B.mul(x, y), a * b * c)
    rhs = B.zero()
    for (h1, h2), a in bgd.delta(h).items():
        for (k1, k2), b in bgd.delta(k).items():
            y = pair_value(C.sigma, H.table[h2][k2], H.basis(m), n, d)
            _acc(rhs, B.mul(C.sig(h1, k1), y), a * b)
    return lhs, rhs


def check_cocycle_identity(C, rep):
    n = C.H.dim

    def bad():
        for h, k, m in itertools.product(range(n), repeat=3):
            lhs, rhs = cocycle_identity_sides(C, h, k, m)
            if lhs != rhs:
                yield (h, k, m)
    rep.expect_none("cocycle identity", bad())


def twisted_module_sides(C, h, k, b):
    B, H, bgd, M = C.B, C.H, C.bgd, C.measuring
    eb = B.basis(b)
    lhs = B.zero()
    rhs = B.zero()
    for (h1, h2), x in bgd.delta(h).items():
        for (k1, k2), y in bgd.delta(k).items():
            _acc(lhs, B.mul(M.act(h1, M.act(k1, eb)), C.sig(h2, k2)), x * y)
            _acc(rhs, B.mul(C.sig(h1, k1), M.act_vec(H.table[h2][k2], eb)), x * y)
    return lhs, rhs


def check_twisted_module(C, rep, unital=True):
    B, H, M = C.B, C.H, C.measuring
    n = H.dim
    if unital:
        rep.expect("unit of H acts trivially", M.act_matrix(H.unit) == Matrix.identity(C.field, B.dim))

    def bad():
        for h, k, b in itertools.product(range(n), range(n), range(B.dim)):
            lhs, rhs = twisted_module_sides(C, h, k, b)
            if lhs != rhs:
                yield (h, k, b)
    rep.expect_none("twisted module law", bad())


def check_pisi(C, rep):
    """sigma(h1, k1) iota(pi(h2 k2)) = sigma(h, k)."""
    B, H, bgd, M = C.B, C.H, C.bgd, C.measuring
    n = H.dim

    def bad():
        for h, k in itertools.product(range(n), repeat=2):
            acc = B.zero()
            for (h1, h2), x in bgd.delta(h).items():
                for (k1, k2), y in bgd.delta(k).items():
                    _acc(acc, B.mul(C.sig(h1, k1), M.iota_pi(H.table[h2][k2])), x * y)
            if acc != C.sig(h, k):
                yield (h, k)
    rep.expect_none("derived: counit absorbed by the cocycle", bad())


def validate_cocycle(C, twisted=True, derived=True):
    """Measuring, balancedness guard, cocycle axioms and the twisted-module laws."""
    rep = Report("cocycle " + C.name)
    rep.extend(validate_measuring(C.measuring), "measuring")
    check_sigma_balanced(C, C.sigma, "t", rep)
    if not rep.ok:
        return rep
    check_sigma_module_laws(C, C.sigma, rep)
    check_cocycle_balance_b(C, rep)
    check_normalized(C, C.sigma, rep)
    check_cocycle_identity(C, rep)
    if twisted:
        check_twisted_module(C, rep)
    if derived and rep.ok:
        check_pisi(C, rep)
    if C.sigma_inv is not None:
        rep.extend(validate_cocycle_inverse(C, C.sigma_inv), "inverse")
    return rep


# -------------------------------------------------------- cocycle inverse

def _inverse_residual(C, weak=False):
    B, H, bgd, M = C.B, C.H, C.bgd, C.measuring
    n, d = H.dim, B.dim
    e = H.basis
    one = B.unit
    # h . (k . 1) and h k . 1 are independent of the unknown
    hk1 = {}
    hk_1 = {}
    for h, k in itertools.product(range(n), repeat=2):
        hk1[h, k] = M.act(h, M.act(k, one))
        hk_1[h, k] = M.act_vec(H.table[h][k], one)

    def residual(X):
        out = []
        for imgs, side in ((bgd.s_img, "left"), (bgd.t_img, "right")):
            for l, h, k in itertools.product(range(len(imgs)), range(n), range(n)):
                lhs = pair_value(X, H.mul(imgs[l], e(h)), e(k), n, d)
                v = X.col(h * n + k)
                il = M.iota.col(l)
                rhs = B.mul(il, v) if side == "left" else B.mul(v, il)
                out.extend(sub_vec(lhs, rhs))
        for l, h, k in itertools.product(range(bgd.base.dim), range(n), range(n)):
            lhs = pair_value(X, H.mul(e(h), bgd.s_img[l]), e(k), n, d)
            rhs = pair_value(X, e(h), H.mul(bgd.s_img[l], e(k)), n, d)
            out.extend(sub_vec(lhs, rhs))
            lhs = B.zero()
            for (x, y), c in bgd.delta(h).items():
                _acc(lhs, B.mul(X.col(x * n + k), M.act(y, M.iota.col(l))), c)
            rhs = pair_value(X, e(h), H.mul(bgd.t_img[l], e(k)), n, d)
            out.extend(sub_vec(lhs, rhs))
        for h, k in itertools.product(range(n), repeat=2):
            right = B.zero()
            left = B.zero()
            for (h1, h2), x in bgd.delta(h).items():
                for (k1, k2), y in bgd.delta(k).items():
                    _acc(right, B.mul(C.sig(h1, k1), X.col(h2 * n + k2)), x * y)
                    _acc(left, B.mul(X.col(h1 * n + k1), C.sig(h2, k2)), x * y)
            out.extend(sub_vec(right, hk1[h, k]))
            out.extend(sub_vec(left, hk_1[h, k]))
            if weak:
                acc = B.zero()
                for (h1, h2), x in bgd.delta(h).items():
                    for (k1, k2), y in bgd.delta(k).items():
                        _acc(acc, B.mul(hk_1[h1, k1], X.col(h2 * n + k2)), x * y)
                out.extend(sub_vec(acc, X.col(h * n + k)))
        return out
    return residual


def solve_cocycle_inverse(C, weak=False):
    """The inverse of the cocycle as a matrix on the ambient H (x)_k H, or None.

    Solutions are unique on the balanced tensor product; the particular
    solution of the linear system is returned.
    """
    sol = solve_unknown_map(C.field, C.B.dim, C.H.dim ** 2, _inverse_residual(C, weak))
    if sol is None:
        return None
    return sol[0]


def validate_cocycle_inverse(C, S, weak=False, lemmas=True):
    rep = Report("cocycle inverse")
    res = _inverse_residual(C, weak)(S)
    rep.expect_zero("inverse axioms", res)
    check_sigma_balanced(C, S, "s", rep, label="inverse")
    if lemmas and not weak:
        check_normalized(C, S, rep, label="inverse")
        rep.extend(check_inverse_lemmas(C.with_inverse(S)), "derived")
    return rep


def check_inverse_lemmas(C):
    """h.sigma(k,m) and h.sigma~(k,m) expressed through sigma and sigma~."""
    rep = Report("cocycle inverse identities")
    B, H, bgd, M = C.B, C.H, C.bgd, C.measuring
    n, d = H.dim, B.dim
    S, T = C.sigma, C.sigma_inv

    def three(h):
        return iterated_coproduct(bgd, h, 3)

    def bad(which):
        for h, k, m in itertools.product(range(n), repeat=3):
            if which == "a":
                lhs = M.act(h, C.sig(k, m))
            else:
                lhs = M.act(h, C.sig_inv(k, m))
            rhs = B.zero()
            for (h1, h2, h3), x in three(h):
                if which == "a":
                    for (k1, k2, k3), y in three(k):
                        for (m1, m2), z in bgd.delta(m).items():
                            v = B.mul_many(C.sig(h1, k1),
                                           pair_value(S, H.table[h2][k2], H.basis(m1), n, d),
                                           pair_value(T, H.basis(h3), H.table[k3][m2], n, d))
                            _acc(rhs, v, x * y * z)
                else:
                    for (k1, k2, k3), y in three(k):
                        for (m1, m2), z in bgd.delta(m).items():
                            v = B.mul_many(pair_value(S, H.basis(h1), H.table[k1][m1], n, d),
                                           pair_value(T, H.table[h2][k2], H.basis(m2), n, d),
                                           C.sig_inv(h3, k3))
                            _acc(rhs, v, x * y * z)
            if lhs != rhs:
                yield (h, k, m)
    rep.expect_none("measuring of the cocycle", bad("a"))
    rep.expect_none("measuring of the inverse", bad("b"))
    return rep


# -------------------------------------------------------- crossed product

def crossed_space(bgd, B, iota):
    """B (x)_L H with L acting on B by right multiplication through iota."""
    return TensorSpace(B.field, [B.dim, bgd.H.dim],
                       [([B.right_mul(iota.col(l)) for l in range(bgd.base.dim)], bgd.left_act)])


def crossed_product_table(C, X):
    B, H, bgd, M = C.B, C.H, C.bgd, C.measuring
    n = H.dim
    lifts = [X.lift(X_basis) for X_basis in _basis_vectors(C.field, X.dim)]

    def prod(q, r):
        out = {}
        for (b, h), c in lifts[q].items():
            for (b2, k), c2 in lifts[r].items():
                for (h1, h2, h3), x in iterated_coproduct(bgd, h, 3):
                    for (k1, k2), y in bgd.delta(k).items():
                        v = B.mul_many(B.basis(b), M.act(h1, B.basis(b2)), C.sig(h2, k1))
                        add_terms(out, pure_terms(v, H.table[h3][k2]), c * c2 * x * y)
        return X.project(out)
    return prod


def _basis_vectors(field, d):
    for i in range(d):
        v = [field.zero] * d
        v[i] = field.one
        yield v


class CrossedProduct:
    def __init__(self, cocycle, algebra, space, report, Hd=None, name=""):
        self.cocycle = cocycle
        self.A = algebra
        self.space = space
        self.report = report
        self.Hd = Hd
        self.name = name
        self._ca = None

    @property
    def field(self):
        return self.A.field

    @property
    def B(self):
        return self.cocycle.B

    @property
    def H(self):
        return self.cocycle.H

    def element(self, bvec, hvec):
        return self.space.project(pure_terms(bvec, hvec))

    def b_inclusion(self):
        B = self.B
        return Matrix.from_columns(self.field, self.A.dim,
                                   [self.element(B.basis(b), self.H.unit) for b in range(B.dim)])

    def eta_L(self):
        M = self.cocycle.measuring
        return Matrix.from_columns(self.field, self.A.dim,
                                   [self.element(M.iota.col(l), self.H.unit)
                                    for l in range(M.bgd.base.dim)])

    def j(self):
        """h -> 1_B (x) h."""
        H = self.H
        return Matrix.from_columns(self.field, self.A.dim,
                                   [self.element(self.B.unit, H.basis(h)) for h in range(H.dim)])

    def b_pi(self, xvec):
        """(B (x) pi)(x) = b iota(pi(h)) summed over a representative."""
        M = self.cocycle.measuring
        out = self.B.zero()
        for (b, h), c in self.space.lift(xvec).items():
            _acc(out, self.B.mul(self.B.basis(b), M.iota_pi(self.H.basis(h))), c)
        return out

    @property
    def comodule_algebra(self):
        if self._ca is None:
            if self.Hd is None:
                raise CrossedProductError("comodule algebra structure needs a Hopf algebroid")
            self._ca = crossed_comodule_algebra(self)
        return self._ca


def crossed_comodule_algebra(P):
    Hd, X = P.Hd, P.space
    H = Hd.H
    eta_R = Matrix.from_columns(P.field, X.dim,
                                [P.element(P.B.unit, Hd.s_R(Hd.R.basis(r))) for r in range(Hd.R.dim)])

    def coact(bgd):
        def fn(q):
            out = {}
            for (b, h), c in X.basis_terms(q).items():
                for (x, y), d in bgd.delta(h).items():
                    add_terms(out, pure_terms(X.project({(b, x): 1}), H.basis(y)), c * d)
            return out
        return fn
    return ComoduleAlgebra(Hd, P.A, eta_R, coact(Hd.right), coact(Hd.left), name="crossed product")


def build_crossed_product(C, Hd=None, check=True, name=""):
    """B #_sigma H on the carrier B (x)_L H.

    With ``check`` the cocycle and twisted-module axioms and the algebra
    axioms are verified and CrossedProductError is raised on failure.
    """
    rep = Report("crossed product " + name)
    if check:
        rep.extend(validate_cocycle(C), "data")
    if Hd is not None and Hd.left is not C.bgd:
        raise CrossedProductError("the left bialgebroid of the Hopf algebroid must be the measuring one")
    X = crossed_space(C.bgd, C.B, C.measuring.iota)
    unit = X.project(pure_terms(C.B.unit, C.H.unit))
    A = algebra_from_function(C.field, X.dim, crossed_product_table(C, X), unit,
                              name=name or "crossed product")
    rep.extend(validate_algebra(A), "algebra")
    if check and not rep.ok:
        raise CrossedProductError("crossed product data invalid: "
                                  + ", ".join(c.name for c in rep.failures), rep)
    return CrossedProduct(C, A, X, rep, Hd=Hd, name=name)


def crossed_comodule(bgd, A, X):
    """Right comodule over the left bialgebroid on B (x)_L H through B (x) coproduct."""
    H = bgd.H
    right = []
    for l in range(bgd.base.dim):
        cols = [X.project({(b, k): c for (b, h), c0 in X.basis_terms(q).items()
                           for k, c in [(k, c0 * x) for k, x in enumerate(bgd.right_act[l].col(h)) if x != 0]})
                for q in range(X.dim)]
        right.append(Matrix.from_columns(A.field, X.dim, cols))

    def fn(q):
        out = {}
        for (b, h), c in X.basis_terms(q).items():
            for (x, y), d in bgd.delta(h).items():
                add_terms(out, pure_terms(X.project({(b, x): 1}), H.basis(y)), c * d)
        return out
    return Comodule(bgd, X.dim, right, fn, name="B (x)_L H")


def check_crossed_hypotheses(bgd, B, iota, A):
    """Unit 1 (x) 1, left B-linear product, multiplicative unital coaction."""
    rep = Report("crossed product hypotheses")
    X = crossed_space(bgd, B, iota)
    H = bgd.H
    if A.dim != X.dim:
        rep.add("carrier dimension", "fail", detail="%d != %d" % (A.dim, X.dim))
        return rep, X, None
    rep.expect("unit is 1 (x) 1", A.unit == X.project(pure_terms(B.unit, H.unit)))

    def lin():
        for b in range(B.dim):
            Lb = Matrix.from_columns(B.field, X.dim,
                                     [X.project(_left_b(X.basis_terms(q), B, b)) for q in range(X.dim)])
            if A.left_mul(X.project(pure_terms(B.basis(b), H.unit))) != Lb:
                yield (b,)
    rep.expect_none("product left B-linear", lin())
    C = crossed_comodule(bgd, A, X)
    rep.extend(validate_comodule(C), "coaction")

    def mult():
        for a, b in itertools.product(range(A.dim), repeat=2):
            lhs = C.coaction.apply(A.table[a][b])
            rhs = C.MH.project(mul_terms([A, H], C.rho(a), C.rho(b)))
            if lhs != rhs:
                yield (a, b)
    rep.expect_none("coaction multiplicative", mult())
    return rep, X, C


def _left_b(terms, B, b):
    out = {}
    for (x, h), c in terms.items():
        for k, v in enumerate(B.table[b][x]):
            if v != 0:
                add_terms(out, {(k, h): c * v})
    return out


def extract_measuring_cocycle(bgd, B, iota, A):
    """Measuring and cocycle of an algebra on B (x)_L H, with the round-trip check.

    Returns ``(cocycle, report)``; raises CrossedProductError if the
    hypotheses fail.
    """
    rep, X, _ = check_crossed_hypotheses(bgd, B, iota, A)
    if not rep.ok:
        raise CrossedProductError("hypotheses fail: " + ", ".join(c.name for c in rep.failures), rep)
    H = bgd.H
    proto = CrossedProduct(None, A, X, rep)
    meas = Measuring(bgd, B, iota, [Matrix(B.field, B.dim, B.dim)] * H.dim)

    def bpi(x):
        out = B.zero()
        for (b, h), c in X.lift(x).items():
            _acc(out, B.mul(B.basis(b), meas.iota_pi(H.basis(h))), c)
        return out

    one_h = lambda h: X.project(pure_terms(B.unit, H.basis(h)))
    b_one = lambda b: X.project(pure_terms(B.basis(b), H.unit))
    M = Measuring(bgd, B, iota, lambda h, b: bpi(A.mul(one_h(h), b_one(b))))
    C = Cocycle(M, lambda h, k: bpi(A.mul(one_h(h), one_h(k))), name="extracted")
    rep.extend(validate_cocycle(C), "extracted")
    rebuilt = build_crossed_product(C, check=False)
    rep.expect("rebuilt product table identical", rebuilt.A.same_as(A))
    return C, rep


# ---------------------------------------------------------------- gauge

def hom_LL_context(C):
    """Conv with the single object L: L-L bilinear maps H -> B."""
    return ConvContext(C.B, {"L": C.bgd}, {"L": C.measuring.iota}, name="Hom_LL(H,B)")


def check_gauge_map(C, chi):
    """Bilinearity, normalization and invertibility of chi; returns (inverse, report)."""
    rep = Report("gauge map")
    ctx = hom_LL_context(C)
    phi = ctx.morphism("L", "L", chi)
    rep.expect_none("L-L bilinear", (w for w, v in ctx.bilinearity_residuals("L", "L", chi)
                                     if not is_zero(v)))
    rep.expect("normalized", chi.apply(C.H.unit) == C.B.unit)
    inv = None
    if rep.ok:
        try:
            inv = solve_convolution_inverse(phi)
        except ConvolutionError:
            inv = None
    rep.expect("convolution invertible", inv is not None)
    return (inv.matrix if inv is not None else None), rep


def gauge_maps(C):
    """Bilinear normalized maps H -> B as (particular, kernel), or None."""
    ctx = hom_LL_context(C)
    H, B = C.H, C.B

    def residual(X):
        out = [x for _, v in ctx.bilinearity_residuals("L", "L", X) for x in v]
        out.extend(sub_vec(X.apply(H.unit), B.unit))
        return out
    return solve_unknown_map(C.field, B.dim, H.dim, residual)


def random_gauge_map(C, rng, tries=50):
    """A random convolution invertible gauge map, or None after ``tries`` draws."""
    sol = gauge_maps(C)
    if sol is None:
        return None
    for _ in range(tries):
        chi = random_combination(C.field, sol[0], sol[1], rng)
        inv, rep = check_gauge_map(C, chi)
        if inv is not None:
            return chi
    return None


class GaugeTransform:
    def __init__(self, cocycle, chi, chi_inv, phi, report):
        self.cocycle = cocycle
        self.chi = chi
        self.chi_inv = chi_inv
        self.phi = phi
        self.report = report


def gauge_transform(C, chi, verify=True):
    """Gauge transform of a crossed product datum by chi: H -> B.

    Raises CrossedProductError if chi is not bilinear, normalized and
    convolution invertible.  With ``verify`` the new data is validated and
    the map b (x) h -> b chi(h1) (x) h2 is checked to be an algebra
    isomorphism between the two crossed products.
    """
    chi_inv, rep = check_gauge_map(C, chi)
    if not rep.ok:
        raise CrossedProductError("invalid gauge map: " + ", ".join(c.name for c in rep.failures), rep)
    B, H, bgd, M = C.B, C.H, C.bgd, C.measuring
    n = H.dim
    ch = lambda h: chi.col(h)
    chb = lambda h: chi_inv.col(h)

    def act(h, b):
        out = B.zero()
        for (h1, h2, h3), x in iterated_coproduct(bgd, h, 3):
            _acc(out, B.mul_many(ch(h1), M.act(h2, B.basis(b)), chb(h3)), x)
        return out

    def sig(h, k):
        out = B.zero()
        for (h1, h2, h3, h4), x in iterated_coproduct(bgd, h, 4):
            for (k1, k2, k3), y in iterated_coproduct(bgd, k, 3):
                v = B.mul_many(ch(h1), M.act(h2, ch(k1)), C.sig(h3, k2),
                               chi_inv.apply(H.table[h4][k3]))
                _acc(out, v, x * y)
        return out

    M2 = Measuring(bgd, B, M.iota, act, name="gauged")
    C2 = Cocycle(M2, sig, name="gauged")
    X = crossed_space(bgd, B, M.iota)
    phi = gauge_iso(C, chi, X)
    if verify:
        rep.extend(validate_cocycle(C2), "gauged")
        if rep.ok:
            P1 = build_crossed_product(C, check=False)
            P2 = build_crossed_product(C2, check=False)
            rep.extend(check_algebra_map(P2.A, P1.A, phi, name="gauge isomorphism"), "gauge map")
            rep.expect("gauge map invertible", phi.inverse() is not None)
    return GaugeTransform(C2, chi, chi_inv, phi, rep)


def gauge_iso(C, chi, X):
    """b (x) h -> b chi(h1) (x) h2 on B (x)_L H."""
    B, H, bgd = C.B, C.H, C.bgd
    cols = []
    for q in range(X.dim):
        out = {}
        for (b, h), c in X.basis_terms(q).items():
            for (h1, h2), x in bgd.delta(h).items():
                add_terms(out, pure_terms(B.mul(B.basis(b), chi.col(h1)), H.basis(h2)), c * x)
        cols.append(X.project(out))
    return Matrix.from_columns(C.field, X.dim, cols)


def same_cocycle(C1, C2):
    """Equal measurings and equal cocycles on the balanced tensor product."""
    if [m for m in C1.measuring.action] != [m for m in C2.measuring.action]:
        return False
    P1 = build_crossed_product(C1, check=False)
    P2 = build_crossed_product(C2, check=False)
    return P1.A.same_as(P2.A)


# ----------------------------------------------------------- equivalence

class Equivalence:
    """Outcome of an equivalence search: status is "equivalent", "inequivalent" or "undetermined"."""

    def __init__(self, status, chi=None, method="", report=None):
        self.status = status
        self.chi = chi
        self.method = method
        self.report = report if report is not None else Report("equivalence")

    def __repr__(self):
        return "Equivalence(%s via %s)" % (self.status, self.method)


def _equivalence_constraints(C1, C2):
    """Affine constraints on chi: bilinear, normalized, intertwining the measurings."""
    B, H, bgd = C1.B, C1.H, C1.bgd
    M1, M2 = C1.measuring, C2.measuring
    ctx = hom_LL_context(C1)
    n = H.dim

    def residual(X):
        out = [x for _, v in ctx.bilinearity_residuals("L", "L", X) for x in v]
        out.extend(sub_vec(X.apply(H.unit), B.unit))
        for h, b in itertools.product(range(n), range(B.dim)):
            lhs = B.zero()
            rhs = B.zero()
            for (h1, h2), c in bgd.delta(h).items():
                _acc(lhs, B.mul(M2.act(h1, B.basis(b)), X.col(h2)), c)
                _acc(rhs, B.mul(X.col(h1), M1.act(h2, B.basis(b))), c)
            out.extend(sub_vec(lhs, rhs))
        return out
    return solve_unknown_map(C1.field, B.dim, n, residual)


def is_gauge_between(C1, C2, chi):
    """True when chi is a valid gauge map and gauge(C1, chi) equals C2."""
    try:
        g = gauge_transform(C1, chi, verify=False)
    except CrossedProductError:
        return False
    return same_cocycle(g.cocycle, C2)


def check_equivalence(C1, C2, hints=(), enumerate_limit=5000):
    """Decide whether the crossed product of C2 is a gauge transform of that of C1."""
    rep = Report("equivalence")
    B = C1.B
    P1 = build_crossed_product(C1, check=False)
    P2 = build_crossed_product(C2, check=False)
    sol = _equivalence_constraints(C1, C2)
    if sol is None:
        rep.add("linear constraints", "fail", detail="no bilinear normalized intertwiner")
        return Equivalence("inequivalent", method="linear", report=rep)
    part, ker = sol
    rep.add("linear constraints", "pass", detail="affine dimension %d" % len(ker))

    def found(chi, method):
        g = gauge_transform(C1, chi, verify=True)
        rep.extend(g.report, "certificate")
        rep.expect("gauge transform reproduces the second datum", same_cocycle(g.cocycle, C2))
        return Equivalence("equivalent", chi=chi, method=method, report=rep)

    candidates = [("direct", part)] if not ker else []
    ip = Matrix.from_columns(C1.field, B.dim, [C1.measuring.iota_pi(C1.H.basis(h))
                                               for h in range(C1.H.dim)])
    candidates.append(("unit", ip))
    candidates.extend(("hint", h) for h in hints)
    for method, chi in candidates:
        if is_gauge_between(C1, C2, chi):
            return found(chi, method)
    if not ker:
        return Equivalence("inequivalent", method="linear", report=rep)
    A1, A2 = P1.A, P2.A
    if A1.is_commutative() != A2.is_commutative():
        rep.add("commutativity invariant", "pass", detail="algebras differ in commutativity")
        return Equivalence("inequivalent", method="invariant", report=rep)
    if A1.center().dim != A2.center().dim:
        rep.add("center invariant", "pass", detail="centers of different dimension")
        return Equivalence("inequivalent", method="invariant", report=rep)
    field = C1.field
    if field.p is not None and field.p ** len(ker) <= enumerate_limit:
        for coeffs in itertools.product(field.elements(), repeat=len(ker)):
            chi = part
            for c, K in zip(coeffs, ker):
                if c != 0:
                    chi = chi + K.scale(c)
            if is_gauge_between(C1, C2, chi):
                return found(chi, "enumeration")
        return Equivalence("inequivalent", method="enumeration", report=rep)
    status, chi = _groebner_search(C1, C2, P1, P2, part, ker)
    if status == "equivalent":
        return found(chi, "groebner")
    if status == "undetermined":
        rep.undetermined("polynomial system", detail="no rational point found")
    return Equivalence(status, method="groebner", report=rep)


def _groebner_search(C1, C2, P1, P2, part, ker):
    """Solve the quadratic system for chi and its inverse with Groebner bases."""
    import sympy

    field = C1.field
    B, H, bgd = C1.B, C1.H, C1.bgd
    n, d = H.dim, B.dim
    ts = sympy.symbols("t0:%d" % len(ker))
    us = sympy.symbols("u0:%d" % (d * n))
    conv = (lambda x: sympy.Integer(int(x))) if field.p is not None else (
        lambda x: sympy.Rational(int(x.p), int(x.q)))
    chi = [[conv(part.rows[i][j]) + sum(t * conv(K.rows[i][j]) for t, K in zip(ts, ker))
            for j in range(n)] for i in range(d)]
    chb = [[us[i * n + j] for j in range(n)] for i in range(d)]

    def smul(alg, x, y):
        out = [0] * alg.dim
        for i, a in enumerate(x):
            if a == 0:
                continue
            for j, b in enumerate(y):
                if b == 0:
                    continue
                for k, c in alg._sparse[i][j]:
                    out[k] += a * b * conv(c)
        return out

    col = lambda M, h: [M[i][h] for i in range(d)]
    ip = [[conv(x) for x in C1.measuring.iota_pi(H.basis(h))] for h in range(n)]
    eqs = []
    for h in range(n):
        left = [0] * d
        right = [0] * d
        for (h1, h2), c in bgd.delta(h).items():
            left = [a + conv(c) * b for a, b in zip(left, smul(B, col(chi, h1), col(chb, h2)))]
            right = [a + conv(c) * b for a, b in zip(right, smul(B, col(chb, h1), col(chi, h2)))]
        eqs.extend(a - b for a, b in zip(left, ip[h]))
        eqs.extend(a - b for a, b in zip(right, ip[h]))
    # Phi: B#chi -> B#, multiplicative on generators
    X = P1.space
    phi_cols = []
    for q in range(X.dim):
        out = {}
        for (b, h), c in X.basis_terms(q).items():
            for (h1, h2), x in bgd.delta(h).items():
                v = smul(B, [conv(y) for y in B.basis(b)], col(chi, h1))
                for i, vi in enumerate(v):
                    if vi != 0:
                        out[(i, h2)] = out.get((i, h2), 0) + vi * conv(c * x)
        phi_cols.append(_sym_project(X, out, conv))
    apply_phi = lambda v: [sum(phi_cols[q][i] * v[q] for q in range(X.dim)) for i in range(X.dim)]
    A1, A2 = P1.A, P2.A
    for a, b in itertools.product(range(X.dim), repeat=2):
        lhs = apply_phi([conv(x) for x in A2.table[a][b]])
        rhs = smul(A1, phi_cols[a], phi_cols[b])
        eqs.extend(sympy.expand(x - y) for x, y in zip(lhs, rhs))
    eqs = [e for e in (sympy.expand(e) for e in eqs) if e != 0]
    gens = list(ts) + list(us)
    opts = {"modulus": field.p} if field.p is not None else {}
    G = sympy.groebner(eqs, *gens, order="lex", **opts)
    if list(G.exprs) == [1]:
        return "inequivalent", None
    try:
        sols = sympy.solve(list(G.exprs), gens, dict=True) if field.p is None else []
    except NotImplementedError:
        sols = []
    for s in sols:
        # free parameters of a solution family: try a few small values
        for value in (1, -1, 2, 0, 3, -2):
            vals = []
            for t in ts:
                v = s.get(t, t).subs({g: value for g in gens})
                if not v.is_rational:
                    break
                vals.append(field(sympy.Rational(v).p) / field(sympy.Rational(v).q))
            if len(vals) != len(ts):
                continue
            cand = part
            for c, K in zip(vals, ker):
                cand = cand + K.scale(c)
            if is_gauge_between(C1, C2, cand):
                return "equivalent", cand
    return "undetermined", None


def _sym_project(X, terms, conv):
    """Quotient coordinates of symbolic ambient terms, linear in the coefficients."""
    dim = X.dim
    out = [0] * dim
    for key, coeff in terms.items():
        v = X.project({key: 1})
        for i, x in enumerate(v):
            if x != 0:
                out[i] += coeff * conv(x)
    return out


# ------------------------------------------------ cleft <-> crossed product

def cleft_from_crossed(P):
    """The cleft extension B in B #_sigma H with j(h) = 1 (x) h."""
    Hd = P.Hd
    if Hd is None:
        raise CrossedProductError("cleft structure needs a Hopf algebroid")
    C = P.cocycle
    if C.sigma_inv is None:
        raise CrossedProductError("cleft structure needs the cocycle inverse")
    H = Hd.H
    cols = []
    for h in range(H.dim):
        out = {}
        for (h1, h2), x in Hd.left.delta(h).items():
            s = Hd.antipode(H.basis(h1))
            for (u, v), y in Hd.left.delta_terms(s).items():
                add_terms(out, pure_terms(C.sig_inv(u, h2), H.basis(v)), x * y)
        cols.append(P.space.project(out))
    jb = Matrix.from_columns(P.field, P.A.dim, cols)
    return CleftExtension(P.comodule_algebra, P.eta_L(), P.j(), jb, name="crossed product")


def crossed_from_cleft(C):
    """Measuring, invertible cocycle and the isomorphism A -> B #_sigma H for cleft data.

    Returns ``(cocycle, crossed product, iso, report)``.
    """
    rep = Report("crossed product of a cleft extension")
    Hd, A, CA = C.Hd, C.A, C.CA
    H = Hd.H
    if C.jv(H.unit) != A.unit:
        C = normalize(C)
    B = CA.B
    iota = Matrix.from_columns(C.field, B.dim,
                               [CA.a_to_b(C.eta_L.col(l)) for l in range(Hd.L.dim)])
    j = C.j.value
    jb = C.j_inv.value
    ranges = []

    def to_b(v, what):
        c = CA.a_to_b(v)
        if c is None:
            ranges.append(what)
            return B.zero()
        return c

    def act(h, b):
        out = A.zero()
        bv = CA.B_space.basis[b]
        for (x, y), c in Hd.right.delta(h).items():
            _acc(out, A.mul_many(j(x), bv, jb(y)), c)
        return to_b(out, ("measuring", h, b))

    def sig(h, k):
        out = A.zero()
        for (h1, h2), x in Hd.right.delta(h).items():
            for (k1, k2), y in Hd.right.delta(k).items():
                _acc(out, A.mul_many(j(h1), j(k1), C.j_inv.matrix.apply(H.table[h2][k2])), x * y)
        return to_b(out, ("cocycle", h, k))

    def sig_inv(h, k):
        out = A.zero()
        for (h1, h2), x in Hd.right.delta(h).items():
            for (k1, k2), y in Hd.right.delta(k).items():
                _acc(out, A.mul_many(C.j.matrix.apply(H.table[h1][k1]), jb(k2), jb(h2)), x * y)
        return to_b(out, ("inverse", h, k))

    M = Measuring(Hd.left, B, iota, act, name="from cleft")
    Coc = Cocycle(M, sig, sig_inv, name="from cleft")
    rep.expect_none("values lie in the coinvariants", iter(ranges))
    rep.extend(validate_cocycle(Coc), "cocycle")
    P = build_crossed_product(Coc, Hd=Hd, check=False)
    nb = normal_basis_maps(C)
    rep.extend(nb.report, "normal basis")
    rep.expect("normal basis target is the crossed product carrier", nb.space is P.space)
    rep.extend(check_algebra_map(A, P.A, nb.kappa, name="normal basis map"), "isomorphism")
    return Coc, P, nb.kappa, rep


def classify_cleaving_maps(C, j2):
    """chi with j2(h) = chi(h_(1)) j(h_(2)), or None when j2 is not a cleaving map.

    Returns ``(chi, report)``; chi is given in coinvariant coordinates.
    """
    rep = Report("cleaving map comparison")
    Hd, A, CA = C.Hd, C.A, C.CA
    H = Hd.H
    B = CA.B
    vals = []
    inB = True
    for h in range(H.dim):
        out = A.zero()
        for (x, y), c in Hd.right.delta(h).items():
            _acc(out, A.mul(j2.col(x), C.jbar(H.basis(y))), c)
        b = CA.a_to_b(out)
        if b is None:
            inB = False
            b = B.zero()
        vals.append((out, b))
    rep.expect("values lie in the coinvariants", inB)
    if not inB:
        return None, rep
    chi = Matrix.from_columns(C.field, B.dim, [b for _, b in vals])
    iota = Matrix.from_columns(C.field, B.dim,
                               [CA.a_to_b(C.eta_L.col(l)) for l in range(Hd.L.dim)])
    ctx = ConvContext(B, {"L": Hd.left}, {"L": iota})
    rep.expect_none("L-L bilinear", (w for w, v in ctx.bilinearity_residuals("L", "L", chi)
                                     if not is_zero(v)))
    try:
        inv = solve_convolution_inverse(ctx.morphism("L", "L", chi)) if rep.ok else None
    except ConvolutionError:
        inv = None
    rep.expect("convolution invertible", inv is not None)

    def factor():
        for h in range(H.dim):
            out = A.zero()
            for (x, y), c in Hd.left.delta(h).items():
                _acc(out, A.mul(vals[x][0], C.j.value(y)), c)
            if out != j2.col(h):
                yield (h,)
    rep.expect_none("second map factors through the first", factor())
    rep.extend(verify_cleft(CleftExtension(CA, C.eta_L, j2)), "candidate")
    return (chi if rep.ok else None), rep
