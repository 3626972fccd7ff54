"""Strong connections, total integrals, the T-flatness map and relative injectivity.

All constructions take cleft data (a cleaving map and its inverse) and a
unital subalgebra T of the coinvariants B.  A (x)_T A carries the right
coaction A (x)_T rho and the left coaction obtained from the H_L-coaction
through the inverse antipode.
"""

from .algebra import TensorSpace, add_terms, pure_terms, expand, apply_factor, is_zero, sub_vec
from .comodule import antipode_flip_back
from .crossed import iterated_coproduct, _acc
from .linalg import (Matrix, Subspace, solve_linear, quotient_by, solve_matrix_equations,
                     equation_residual, kernel, solve_unknown_map)
from .report import Report


class ConnectionError_(ValueError):
    pass


def _need_bijective(Hd):
    if not Hd.bijective:
        raise ConnectionError_("this construction needs a bijective antipode")


class SubalgebraContext:
    """Cleft data together with a subalgebra T of B (given by vectors in A).

    ``separability`` is an optional list of pairs (e_i, f_i) of A-vectors
    forming a separability idempotent of T.
    """

    def __init__(self, C, T_vectors, separability=None, name=""):
        _need_bijective(C.Hd)
        self.C = C
        self.CA = C.CA
        self.A = C.A
        self.Hd = C.Hd
        self.field = C.field
        self.name = name
        A = self.A
        self.T = Subspace(self.field, A.dim, T_vectors)
        self.separability = separability
        tb = self.T.basis
        self.AtA = TensorSpace(self.field, [A.dim, A.dim],
                               [([A.right_mul(t) for t in tb], [A.left_mul(t) for t in tb])])
        B = self.CA.B
        self.T_in_B = [self.CA.a_to_b(t) for t in tb]
        if B is not None and all(v is not None for v in self.T_in_B):
            self.BtB = TensorSpace(self.field, [B.dim, B.dim],
                                   [([B.right_mul(t) for t in self.T_in_B],
                                     [B.left_mul(t) for t in self.T_in_B])])
        else:
            self.BtB = None
        self.left_comodule = antipode_flip_back(self.CA.comodule)

    @property
    def n(self):
        return self.Hd.H.dim


def base_field_context(C):
    return SubalgebraContext(C, [C.A.unit], separability=[(C.A.unit, C.A.unit)], name="T = k")


def base_ring_context(C):
    """T = eta_L(L), with a separability idempotent when one exists."""
    ctx = SubalgebraContext(C, C.eta_L.columns(), name="T = L")
    ctx.separability = solve_separability(ctx)
    return ctx


def solve_separability(ctx):
    """Pairs (e_i, f_i) of a separability idempotent of T, or None if T is not separable."""
    A, field = ctx.A, ctx.field
    tb = ctx.T.basis
    m = len(tb)
    d = A.dim

    def tensor(x, y):
        out = [field.zero] * (d * d)
        for i, a in enumerate(x):
            if a != 0:
                for j, b in enumerate(y):
                    if b != 0:
                        out[i * d + j] += a * b
        return out

    def residual(X):
        out = sub_vec([sum((X.rows[i][j] * v for i in range(m) for j in range(m)
                            for v in [A.mul(tb[i], tb[j])[k]]), field.zero) for k in range(d)], A.unit)
        for t in tb:
            diff = [field.zero] * (d * d)
            for i in range(m):
                for j in range(m):
                    c = X.rows[i][j]
                    if c == 0:
                        continue
                    left = tensor(A.mul(t, tb[i]), tb[j])
                    right = tensor(tb[i], A.mul(tb[j], t))
                    diff = [x + c * (l - r) for x, l, r in zip(diff, left, right)]
            out.extend(diff)
        return out
    sol = solve_unknown_map(field, m, m, residual)
    if sol is None:
        return None
    X = sol[0]
    pairs = []
    for i in range(m):
        f = A.zero()
        for j in range(m):
            _acc(f, tb[j], X.rows[i][j])
        pairs.append((tb[i], f))
    return pairs


def validate_context(ctx):
    rep = Report("subalgebra context " + ctx.name)
    A, T = ctx.A, ctx.T
    rep.expect("T contains the unit", T.contains(A.unit))
    rep.expect_none("T closed under products",
                    ((i, k) for i, x in enumerate(T.basis) for k, y in enumerate(T.basis)
                     if not T.contains(A.mul(x, y))))
    rep.expect("T inside the coinvariants", all(v is not None for v in ctx.T_in_B))
    if ctx.separability is not None:
        rep.extend(check_separability(ctx), "separability")
    return rep


def check_separability(ctx):
    """sum e_i f_i = 1 and t e_i (x) f_i = e_i (x) f_i t in T (x)_k T."""
    rep = Report("separability idempotent")
    A = ctx.A
    pairs = ctx.separability
    rep.expect("entries lie in T", all(ctx.T.contains(e) and ctx.T.contains(f) for e, f in pairs))
    total = A.zero()
    for e, f in pairs:
        _acc(total, A.mul(e, f), ctx.field.one)
    rep.expect("multiplies to the unit", total == A.unit)

    def central():
        for i, t in enumerate(ctx.T.basis):
            left, right = {}, {}
            for e, f in pairs:
                add_terms(left, pure_terms(A.mul(t, e), f))
                add_terms(right, pure_terms(e, A.mul(f, t)))
            keys = set(left) | set(right)
            if any(left.get(k, 0) != right.get(k, 0) for k in keys):
                yield (i,)
    rep.expect_none("central in T (x) T", central())
    return rep


# ------------------------------------------------ coaction helpers

def _spaces(ctx):
    """Target spaces of the four coactions on A (x)_T A."""
    Hd, A = ctx.Hd, ctx.A
    n = ctx.n
    over_R, over_L = ctx.CA.comodule.over_R, ctx.CA.comodule.over_L
    lc = ctx.left_comodule
    tgap = ctx.AtA.gaps[0]
    F = ctx.field
    return {
        "right R": TensorSpace(F, [A.dim, A.dim, n], [tgap, over_R.MH.gaps[0]]),
        "right L": TensorSpace(F, [A.dim, A.dim, n], [tgap, over_L.MH.gaps[0]]),
        "left R": TensorSpace(F, [n, A.dim, A.dim], [lc.HM_R.gaps[0], tgap]),
        "left L": TensorSpace(F, [n, A.dim, A.dim], [lc.HM_L.gaps[0], tgap]),
    }


def colinearity_failures(ctx, ell, which):
    """Basis elements h where ell: H -> A (x)_T A fails one of the four colinearities."""
    Hd = ctx.Hd
    space = _spaces(ctx)[which]
    lift = lambda h: ctx.AtA.lift(ell.col(h))
    if which == "right R":
        coact, bgd = ctx.CA.rhoR, Hd.right
    elif which == "right L":
        coact, bgd = ctx.CA.rhoL, Hd.left
    elif which == "left R":
        coact, bgd = ctx.left_comodule.lamR, Hd.right
    else:
        coact, bgd = ctx.left_comodule.lamL, Hd.left
    out = []
    for h in range(ctx.n):
        if which.startswith("right"):
            lhs = expand(lift(h), [None, coact])
            rhs = {}
            for (x, y), c in bgd.delta(h).items():
                for (a, b), d in lift(x).items():
                    add_terms(rhs, {(a, b, y): c * d})
        else:
            lhs = expand(lift(h), [coact, None])
            rhs = {}
            for (x, y), c in bgd.delta(h).items():
                for (a, b), d in lift(y).items():
                    add_terms(rhs, {(x, a, b): c * d})
        if not is_zero(sub_vec(space.project(lhs), space.project(rhs))):
            out.append((h,))
    return out


def tilde_can(ctx):
    """a (x)_T a' -> a a'^[0] (x)_R a'^[1]."""
    A, CA = ctx.A, ctx.CA
    cols = []
    for q in range(ctx.AtA.dim):
        out = {}
        for (a, b), c in ctx.AtA.basis_terms(q).items():
            for (x, h), d in CA.rhoR(b).items():
                add_terms(out, pure_terms(A.table[a][x], ctx.Hd.H.basis(h)), c * d)
        cols.append(CA.AR_H.project(out))
    return Matrix.from_columns(ctx.field, CA.AR_H.dim, cols)


def multiplication(ctx):
    A = ctx.A
    cols = []
    for q in range(ctx.AtA.dim):
        acc = A.zero()
        for (a, b), c in ctx.AtA.basis_terms(q).items():
            _acc(acc, A.table[a][b], c)
        cols.append(acc)
    return Matrix.from_columns(ctx.field, A.dim, cols)


def check_strong_connection(ctx, ell, both_corings=True):
    rep = Report("strong connection")
    rep.expect_none("right H_R-colinear", iter(colinearity_failures(ctx, ell, "right R")))
    rep.expect_none("left H_R-colinear", iter(colinearity_failures(ctx, ell, "left R")))
    can = tilde_can(ctx)
    H, A, CA = ctx.Hd.H, ctx.A, ctx.CA
    rep.expect_none("canonical map sends it to 1 (x) h",
                    ((h,) for h in range(ctx.n)
                     if can.apply(ell.col(h)) != CA.AR_H.project(pure_terms(A.unit, H.basis(h)))))
    mu = multiplication(ctx)
    rep.expect("derived: multiplication gives eta_R pi_R", mu @ ell == ctx.CA.eta_R @ ctx.Hd.right.counit)
    if both_corings:
        rep.expect_none("derived: right H_L-colinear", iter(colinearity_failures(ctx, ell, "right L")))
        rep.expect_none("derived: left H_L-colinear", iter(colinearity_failures(ctx, ell, "left L")))
    return rep


# ------------------------------------------- canonical strong connection

def canonical_strong_connection(C):
    """h -> jbar(h_(1)) (x)_L j(h_(2)), with its checks and the projectivity splitting."""
    from .convolution import normal_basis_maps
    ctx = base_ring_context(C)
    H, A = C.Hd.H, C.A
    cols = []
    for h in range(H.dim):
        out = {}
        for (x, y), c in C.Hd.left.delta(h).items():
            add_terms(out, pure_terms(C.j_inv.value(x), C.j.value(y)), c)
        cols.append(ctx.AtA.project(out))
    ell = Matrix.from_columns(C.field, ctx.AtA.dim, cols)
    rep = check_strong_connection(ctx, ell)
    rep.extend(check_projectivity_splitting(ctx, normal_basis_maps(C)), "splitting")
    return ctx, ell, rep


def check_projectivity_splitting(ctx, nb):
    """alpha(a) = b (x)_L j(h) for kappa(a) = b (x) h: a B-linear colinear section of the product."""
    rep = Report("relative projectivity")
    C, A, CA = ctx.C, ctx.A, ctx.CA
    Bsp = CA.B_space
    cols = []
    for a in range(A.dim):
        out = {}
        for (b, h), c in nb.space.lift(nb.kappa.col(a)).items():
            add_terms(out, pure_terms(Bsp.basis[b], C.j.value(h)), c)
        cols.append(ctx.AtA.project(out))
    alpha = Matrix.from_columns(ctx.field, ctx.AtA.dim, cols)
    mu = multiplication(ctx)
    rep.expect("section of the multiplication", mu @ alpha == Matrix.identity(ctx.field, A.dim))
    left = _left_mult_on_AtA(ctx)
    rep.expect_none("left B-linear", ((i,) for i, b in enumerate(Bsp.basis)
                                      if alpha @ A.left_mul(b) != left(b) @ alpha))
    space = _spaces(ctx)["right R"]

    def colin():
        for a in range(A.dim):
            lhs = expand(ctx.AtA.lift(alpha.col(a)), [None, CA.rhoR])
            rhs = {}
            for (x, h), c in CA.rhoR(a).items():
                for (u, v), d in ctx.AtA.lift(alpha.col(x)).items():
                    add_terms(rhs, {(u, v, h): c * d})
            if not is_zero(sub_vec(space.project(lhs), space.project(rhs))):
                yield (a,)
    rep.expect_none("right H_R-colinear", colin())
    return rep


def _left_mult_on_AtA(ctx):
    A = ctx.A

    def mat(b):
        Lb = A.left_mul(b)
        return Matrix.from_columns(ctx.field, ctx.AtA.dim,
                                   [ctx.AtA.project(apply_factor(ctx.AtA.basis_terms(q), 0, Lb))
                                    for q in range(ctx.AtA.dim)])
    return mat


# ------------------------------------------------ classification

def _b_inclusion(ctx):
    """B (x)_T B -> A (x)_T A."""
    Bsp = ctx.CA.B_space
    cols = []
    for q in range(ctx.BtB.dim):
        out = {}
        for (b, b2), c in ctx.BtB.basis_terms(q).items():
            add_terms(out, pure_terms(Bsp.basis[b], Bsp.basis[b2]), c)
        cols.append(ctx.AtA.project(out))
    return Matrix.from_columns(ctx.field, ctx.AtA.dim, cols)


def connection_to_f(ctx, ell):
    """f(h) = j(h^(1)) ell(h^(2)) jbar(h^(3)) in B (x)_T B, or None if it leaves B (x)_T B."""
    C, A = ctx.C, ctx.A
    inc = _b_inclusion(ctx)
    cols = []
    for h in range(ctx.n):
        out = {}
        for (x, y, z), c in iterated_coproduct(ctx.Hd.right, h, 3):
            jx, jz = C.j.value(x), C.j_inv.value(z)
            for (a, b), d in ctx.AtA.lift(ell.col(y)).items():
                add_terms(out, pure_terms(A.mul(jx, A.basis(a)), A.mul(A.basis(b), jz)), c * d)
        sol = solve_linear(inc, ctx.AtA.project(out))
        if sol is None:
            return None
        cols.append(sol)
    return Matrix.from_columns(ctx.field, ctx.BtB.dim, cols)


def f_to_connection(ctx, f):
    """ell(h) = jbar(h_(1)) f(h_(2)) j(h_(3))."""
    C, A = ctx.C, ctx.A
    Bsp = ctx.CA.B_space
    cols = []
    for h in range(ctx.n):
        out = {}
        for (x, y, z), c in iterated_coproduct(ctx.Hd.left, h, 3):
            jx, jz = C.j_inv.value(x), C.j.value(z)
            for (b, b2), d in ctx.BtB.lift(f.col(y)).items():
                add_terms(out, pure_terms(A.mul(jx, Bsp.basis[b]), A.mul(Bsp.basis[b2], jz)), c * d)
        cols.append(ctx.AtA.project(out))
    return Matrix.from_columns(ctx.field, ctx.AtA.dim, cols)


def _f_equations(ctx, trace=None):
    """Bilinearity and the trace condition mu_B f = trace (default iota pi_L)."""
    Hd, CA = ctx.Hd, ctx.CA
    B = CA.B
    H = Hd.H
    BtB = ctx.BtB
    iota = [CA.a_to_b(v) for v in ctx.C.eta_L.columns()]

    def induced(M, k):
        return Matrix.from_columns(ctx.field, BtB.dim,
                                   [BtB.project(apply_factor(BtB.basis_terms(q), k, M))
                                    for q in range(BtB.dim)])
    zero = Matrix(ctx.field, BtB.dim, ctx.n)
    eqs = []
    for l in range(len(iota)):
        eqs.append(([(None, Hd.left.left_act[l]), (induced(B.left_mul(iota[l]), 0).scale(-1), None)], zero))
        eqs.append(([(None, Hd.left.right_act[l]), (induced(B.right_mul(iota[l]), 1).scale(-1), None)], zero))
    mu = Matrix.from_columns(ctx.field, B.dim,
                             [_mu_b(BtB.basis_terms(q), B) for q in range(BtB.dim)])
    if trace is None:
        trace = Matrix.from_columns(ctx.field, B.dim,
                                    [Matrix.from_columns(ctx.field, B.dim, iota).apply(Hd.pi_L(H.basis(h)))
                                     for h in range(H.dim)])
    eqs.append(([(mu, None)], trace))
    return eqs


def _mu_b(terms, B):
    acc = B.zero()
    for (a, b), c in terms.items():
        _acc(acc, B.table[a][b], c)
    return acc


def check_f(ctx, f, trace=None):
    rep = Report("connection datum")
    res = equation_residual(_f_equations(ctx, trace), f)
    rep.expect_zero("L-L bilinear with the prescribed trace", res)
    return rep


def f_family(ctx, trace=None):
    """Affine space of valid f: (particular, kernel) or None."""
    if ctx.BtB is None:
        raise ConnectionError_("T is not inside the coinvariants")
    return solve_matrix_equations(ctx.field, ctx.BtB.dim, ctx.n, _f_equations(ctx, trace))


def classify_strong_connections(ctx, ell=None, f=None):
    """Round trips between strong connections and their f-data; returns a report."""
    rep = Report("strong connection classification")
    if ell is not None:
        rep.extend(check_strong_connection(ctx, ell), "connection")
        g = connection_to_f(ctx, ell)
        rep.expect("f lies in B (x)_T B", g is not None)
        if g is not None:
            rep.extend(check_f(ctx, g), "f")
            rep.expect("connection recovered", f_to_connection(ctx, g) == ell)
    if f is not None:
        rep.extend(check_f(ctx, f), "f")
        l2 = f_to_connection(ctx, f)
        rep.extend(check_strong_connection(ctx, l2), "built connection")
        rep.expect("f recovered", connection_to_f(ctx, l2) == f)
    return rep


def solve_strong_connections(ctx):
    """All strong T-connections by direct linear solve: (particular, kernel) or None."""
    A, CA, Hd = ctx.A, ctx.CA, ctx.Hd
    H = Hd.H
    sp = _spaces(ctx)
    unit_h = Matrix.from_columns(ctx.field, CA.AR_H.dim,
                                 [CA.AR_H.project(pure_terms(A.unit, H.basis(h))) for h in range(ctx.n)])
    eqs = [([(tilde_can(ctx), None)], unit_h)]
    for which, side, coact in (("right R", "right", CA.rhoR),
                               ("left R", "left", ctx.left_comodule.lamR)):
        space = sp[which]
        terms = [(_coaction_matrix(ctx, space, side, coact), None)]
        for k, D in _coproduct_slices(Hd.right, ctx.n, side).items():
            terms.append((_tensor_slot(space, ctx.AtA, k, side).scale(-1), D))
        eqs.append((terms, Matrix(ctx.field, space.dim, ctx.n)))
    return solve_matrix_equations(ctx.field, ctx.AtA.dim, ctx.n, eqs)


def _coaction_matrix(ctx, space, side, coact):
    cols = []
    for q in range(ctx.AtA.dim):
        t = ctx.AtA.basis_terms(q)
        terms = expand(t, [None, coact]) if side == "right" else expand(t, [coact, None])
        cols.append(space.project(terms))
    return Matrix.from_columns(ctx.field, space.dim, cols)


def _coproduct_slices(bgd, n, side):
    """D_y with D_y[x, h] = coefficient of x (x) y in delta(h) (side "right"), or of y (x) x."""
    field = bgd.field
    mats = {}
    for h in range(n):
        for (x, y), c in bgd.delta(h).items():
            key, row = (y, x) if side == "right" else (x, y)
            M = mats.setdefault(key, Matrix(field, n, n))
            M.rows[row][h] += c
    return mats


def _tensor_slot(space, source, k, side):
    """source -> space, v -> v (x) e_k (side "right") or e_k (x) v."""
    cols = []
    for q in range(source.dim if hasattr(source, "basis_terms") else source):
        terms = source.basis_terms(q) if hasattr(source, "basis_terms") else {(q,): 1}
        out = {}
        for key, c in terms.items():
            add_terms(out, {(key + (k,)) if side == "right" else ((k,) + key): c})
        cols.append(space.project(out))
    return Matrix.from_columns(space.field, space.dim, cols)


# ------------------------------------------------------------ integrals

def _theta_equations(ctx, colinear_only=False):
    A, Hd = ctx.A, ctx.Hd
    H = Hd.H
    lc = ctx.left_comodule
    terms = [(lc.lam_R, None)]
    for k, D in _coproduct_slices(Hd.right, ctx.n, "left").items():
        terms.append((_tensor_slot(lc.HM_R, A.dim, k, "left").scale(-1), D))
    eqs = [(terms, Matrix(ctx.field, lc.HM_R.dim, ctx.n))]
    if colinear_only:
        return eqs
    for t in ctx.T.basis:
        eqs.append(([(A.left_mul(t) - A.right_mul(t), None)], Matrix(ctx.field, A.dim, ctx.n)))
    unit = Matrix.from_columns(ctx.field, ctx.n, [H.unit])
    eqs.append(([(None, unit)], Matrix.from_columns(ctx.field, A.dim, [A.unit])))
    return eqs


def check_integral(ctx, theta):
    rep = Report("total integral")
    A, Hd = ctx.A, ctx.Hd
    H = Hd.H
    lc = ctx.left_comodule
    res = equation_residual(_theta_equations(ctx, colinear_only=True), theta)
    rep.expect_zero("left H_R-colinear", res)

    def colin_L():
        for h in range(ctx.n):
            rhs = {}
            for (x, y), c in Hd.left.delta(h).items():
                add_terms(rhs, pure_terms(H.basis(x), theta.col(y)), c)
            if lc.lam_L.apply(theta.col(h)) != lc.HM_L.project(rhs):
                yield (h,)
    rep.expect_none("left H_L-colinear", colin_L())
    rep.expect_none("values commute with T",
                    ((h, i) for h in range(ctx.n) for i, t in enumerate(ctx.T.basis)
                     if A.mul(t, theta.col(h)) != A.mul(theta.col(h), t)))
    rep.expect_zero("unital", sub_vec(theta.apply(H.unit), A.unit))
    return rep


def solve_integrals(ctx):
    """Affine space of left total T-integrals: (particular, kernel) or None."""
    return solve_matrix_equations(ctx.field, ctx.A.dim, ctx.n, _theta_equations(ctx))


def integral_to_section(ctx, theta):
    """a -> a^[0] theta(a^[1])."""
    A = ctx.A
    cols = []
    for a in range(A.dim):
        acc = A.zero()
        for (x, h), c in ctx.CA.rhoR(a).items():
            _acc(acc, A.mul(A.basis(x), theta.col(h)), c)
        cols.append(acc)
    return Matrix.from_columns(ctx.field, A.dim, cols)


def section_to_integral(ctx, phi):
    """h -> jbar(h_(1)) phi(j(h_(2)))."""
    C, A = ctx.C, ctx.A
    cols = []
    for h in range(ctx.n):
        acc = A.zero()
        for (x, y), c in ctx.Hd.left.delta(h).items():
            _acc(acc, A.mul(C.j_inv.value(x), phi.apply(C.j.value(y))), c)
        cols.append(acc)
    return Matrix.from_columns(ctx.field, A.dim, cols)


def check_section(ctx, phi):
    """phi: A -> A with values in B, left B-linear, right T-linear, identity on B."""
    rep = Report("bimodule section")
    A, Bsp = ctx.A, ctx.CA.B_space
    rep.expect_none("values in B", ((a,) for a in range(A.dim) if not Bsp.contains(phi.col(a))))
    rep.expect_none("left B-linear", ((i,) for i, b in enumerate(Bsp.basis)
                                      if phi @ A.left_mul(b) != A.left_mul(b) @ phi))
    rep.expect_none("right T-linear", ((i,) for i, t in enumerate(ctx.T.basis)
                                       if phi @ A.right_mul(t) != A.right_mul(t) @ phi))
    rep.expect_none("identity on B", ((i,) for i, b in enumerate(Bsp.basis) if phi.apply(b) != b))
    return rep


def integral_section_correspondence(ctx, theta=None, phi=None):
    rep = Report("integrals and sections")
    if theta is not None:
        rep.extend(check_integral(ctx, theta), "integral")
        s = integral_to_section(ctx, theta)
        rep.extend(check_section(ctx, s), "section")
        rep.expect("integral recovered", section_to_integral(ctx, s) == theta)
    if phi is not None:
        rep.extend(check_section(ctx, phi), "section")
        t = section_to_integral(ctx, phi)
        rep.extend(check_integral(ctx, t), "integral")
        rep.expect("section recovered", integral_to_section(ctx, t) == phi)
    return rep


def separable_integral(ctx):
    """theta(h) = sum e_i jbar(h) j(1) f_i for the separability idempotent of T."""
    if ctx.separability is None:
        raise ConnectionError_("no separability idempotent supplied")
    C, A = ctx.C, ctx.A
    j1 = C.jv(ctx.Hd.H.unit)
    cols = []
    for h in range(ctx.n):
        acc = A.zero()
        for e, f in ctx.separability:
            _acc(acc, A.mul_many(e, C.j_inv.value(h), j1, f), ctx.field.one)
        cols.append(acc)
    return Matrix.from_columns(ctx.field, A.dim, cols)


# ------------------------------------------------------------ T-flatness

class FlatnessMap:
    def __init__(self, kernel_dim, domain_dim, matrix, lands, iso, flat):
        self.kernel_dim = kernel_dim
        self.domain_dim = domain_dim
        self.matrix = matrix
        self.lands_in_kernel = lands
        self.iso = iso
        self.flatness = flat


def commutator_space(A, vectors, T):
    return Subspace(A.field, A.dim, [sub_vec(A.mul(a, t), A.mul(t, a)) for a in vectors for t in T])


def t_flatness_map(ctx, B_vectors=None):
    """The map B/[B,T] -> ker(upsilon_T), its bijectivity, and the flatness verdict."""
    A, CA, H = ctx.A, ctx.CA, ctx.Hd.H
    field = ctx.field
    Bv = CA.B_space.basis if B_vectors is None else B_vectors
    T = ctx.T.basis
    AT = commutator_space(A, [A.basis(i) for i in range(A.dim)], T)
    BT = commutator_space(A, Bv, T)
    Q = quotient_by(A.dim, AT)
    # upsilon modulo [A,T] (x)_R H
    AR = CA.AR_H
    W = Subspace(field, AR.dim, [AR.project(pure_terms(c, H.basis(h))) for c in AT.basis
                                 for h in range(H.dim)])
    WQ = quotient_by(AR.dim, W)
    ups = []
    for a in range(A.dim):
        v = sub_vec(CA.rhoR_vec(A.basis(a)), AR.project(pure_terms(A.basis(a), H.unit)))
        ups.append(WQ.project(v))
    U = Matrix.from_columns(field, len(ups[0]) if ups else 0, ups)
    K = Subspace(field, A.dim, kernel(U).basis + AT.basis)
    ker_q = Subspace(field, Q.dim, [Q.project(v) for v in K.basis])
    lands = all(K.contains(b) for b in Bv)
    dom = Subspace(field, A.dim, list(Bv) + BT.basis)
    dom_dim = dom.dim - BT.dim
    images = [Q.project(v) for v in Bv]
    img = Subspace(field, Q.dim, images)
    coords = []
    if lands:
        for v in images:
            coords.append(ker_q.coordinates(v))
    matrix = Matrix.from_columns(field, ker_q.dim, coords) if coords else None
    injective = (Subspace(field, A.dim, list(Bv) + AT.basis).dim - AT.dim) == dom_dim
    iso = lands and injective and img.dim == ker_q.dim
    if ctx.separability is not None or ctx.T.dim == 1:
        flat = "certified"
    else:
        flat = "undetermined"
    return FlatnessMap(ker_q.dim, dom_dim, matrix, lands, iso, flat)


# -------------------------------------------------- relative injectivity

def colinear_retraction(C):
    """A right-linear colinear retraction of the coaction of a Comodule, or None."""
    bgd = C.bgd
    MH = C.MH
    field = C.field
    dM = C.dim
    acts = []
    for M in bgd.right_act:
        acts.append(Matrix.from_columns(field, MH.dim,
                                        [MH.project(apply_factor(MH.basis_terms(q), 1, M))
                                         for q in range(MH.dim)]))
    # (r (x) H)(M (x) delta) = sum_y slot_y r V_y
    V = {}
    for q in range(MH.dim):
        for (m, h), c in MH.basis_terms(q).items():
            for (x, y), d in bgd.delta(h).items():
                Vy = V.setdefault(y, Matrix(field, MH.dim, MH.dim))
                for i, e in enumerate(MH.project({(m, x): 1})):
                    Vy.rows[i][q] += c * d * e
    eqs = [([(None, C.coaction)], Matrix.identity(field, dM))]
    for p, M in enumerate(acts):
        eqs.append(([(None, M), (C.right_act[p].scale(-1), None)], Matrix(field, dM, MH.dim)))
    terms = [(C.coaction, None)]
    for y, Vy in V.items():
        terms.append((_tensor_slot(MH, dM, y, "right").scale(-1), Vy))
    eqs.append((terms, Matrix(field, MH.dim, MH.dim)))
    sol = solve_matrix_equations(field, dM, MH.dim, eqs)
    return None if sol is None else sol[0]


def relative_injectivity_check(CA):
    """Colinear retractions for the two right and the two left coactions."""
    rep = Report("relative injectivity")
    comods = [("right H_R", CA.comodule.over_R), ("right H_L", CA.comodule.over_L)]
    if CA.Hd.bijective:
        cR, cL = antipode_flip_back(CA.comodule).as_right_comodules()
        comods += [("left H_R", cR), ("left H_L", cL)]
    for name, C in comods:
        r = colinear_retraction(C)
        rep.add("%s retraction" % name, "pass" if r is not None else "fail",
                detail=None if r is not None else "no colinear retraction")
    return rep


# --------------------------------------------- Chern-Galois preconditions

def chern_galois_preconditions(ctx, ell=None):
    """Conditions (a) flatness, (b) integral, (c) strong connection; verdict in the report title."""
    rep = Report("Chern-Galois preconditions")
    rep.extend(validate_context(ctx), "context")
    if ctx.separability is not None or ctx.T.dim == 1:
        rep.add("(a) flat and locally projective over T", "pass",
                detail="T is the ground field or separable")
    else:
        rep.undetermined("(a) flat and locally projective over T",
                         detail="no certificate for general T")
    ints = solve_integrals(ctx)
    rep.add("(b) total integral exists", "pass" if ints is not None else "fail",
            detail=None if ints is not None else "integral system inconsistent")
    if ell is not None:
        r = check_strong_connection(ctx, ell)
        rep.add("(c) strong connection", "pass" if r.ok else "fail",
                detail=None if r.ok else ", ".join(c.name for c in r.failures))
    else:
        sol = solve_strong_connections(ctx)
        rep.add("(c) strong connection", "pass" if sol is not None else "fail")
    return rep


def preconditions_verdict(rep):
    statuses = [c.status for c in rep.checks]
    if "fail" in statuses:
        return "violated"
    if "undetermined" in statuses:
        return "undetermined"
    return "satisfied"
