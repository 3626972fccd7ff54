"""Built-in example instances.

G1  group algebra of a cyclic group, base field as both bases
G2  L (x) L^op with L = k[x]/(x^2)
G3  smash product (k x k) # k[C2] for the swap action
G4  groupoid algebra of the pair groupoid on two objects
G5  twisted group algebra of C2 x C2

The auxiliary instance ``sweedler`` is the smash product k[y]/(y^2) # H4 for
Sweedler's four-dimensional Hopf algebra; its coinvariants admit no
bimodule section.
"""
import itertools

from .algebra import Algebra, algebra_from_function, tensor_algebra, opposite
from .bialgebroid import LeftBialgebroid, RightBialgebroid
from .hopf import HopfAlgebroid
from .linalg import Field, Matrix


def ground_algebra(field):
    return Algebra(field, 1, [[[1]]], [1], ["1"], name="k")


def unit_column(field, A):
    return Matrix.from_columns(field, A.dim, [A.unit])


def group_algebra(field, elements, mult, identity, labels=None, name=""):
    idx = {g: i for i, g in enumerate(elements)}
    n = len(elements)

    def prod(i, j):
        v = [0] * n
        v[idx[mult(elements[i], elements[j])]] = 1
        return v
    unit = [0] * n
    unit[idx[identity]] = 1
    return algebra_from_function(field, n, prod, unit, labels or [str(g) for g in elements], name)


def hopf_from_bialgebra(H, coproduct_terms, counit_vals, antipode_cols=None, name=""):
    """Hopf algebroid over the ground field from bialgebra data."""
    field = H.field
    k = ground_algebra(field)
    u = unit_column(field, H)
    eps = Matrix(field, 1, H.dim, [counit_vals])
    left = LeftBialgebroid(H, k, u, u, coproduct_terms, eps, name=name + "_L")
    right = RightBialgebroid(H, k, u, u, coproduct_terms, eps, name=name + "_R")
    if antipode_cols is None:
        return left, right
    S = Matrix.from_columns(field, H.dim, antipode_cols)
    return HopfAlgebroid(left, right, S, name=name)


def cyclic_group_hopf(n, field=None):
    """G1: k[C_n] with grouplike basis, S(g) = g^-1."""
    field = field or Field()
    H = group_algebra(field, list(range(n)), lambda a, b: (a + b) % n, 0,
                      ["g^%d" % i for i in range(n)], name="k[C%d]" % n)
    cols = []
    for i in range(n):
        v = [0] * n
        v[(-i) % n] = 1
        cols.append(v)
    one = field.one
    return hopf_from_bialgebra(H, lambda i: {(i, i): one}, [1] * n, cols, name="G1(n=%d)" % n)


def idempotent_monoid_bialgebra(field=None):
    """k[{1, z}] with z^2 = z, grouplike basis: a bialgebra with no antipode."""
    field = field or Field()
    H = group_algebra(field, ["1", "z"], lambda a, b: "z" if "z" in (a, b) else "1", "1",
                      name="k[idempotent monoid]")
    one = field.one
    return hopf_from_bialgebra(H, lambda i: {(i, i): one}, [1, 1], name="monoid")


def dual_numbers(field):
    def prod(i, j):
        v = [0, 0]
        if i + j < 2:
            v[i + j] = 1
        return v
    return algebra_from_function(field, 2, prod, [1, 0], ["1", "x"], name="k[x]/(x^2)")


def enveloping_hopf(L, name="G2"):
    """G2-type: H = L (x) L^op over base L, S(l (x) l') = l' (x) l."""
    field = L.field
    d = L.dim
    Lop = opposite(L)
    H = tensor_algebra(L, Lop)
    H.name = "L(x)L^op"
    u = L.unit

    def pair(x, y):
        return [a * b for a in x for b in y]

    e = L.basis
    s_L = Matrix.from_columns(field, H.dim, [pair(e(p), u) for p in range(d)])
    t_L = Matrix.from_columns(field, H.dim, [pair(u, e(p)) for p in range(d)])
    s_R = t_L
    t_R = s_L

    def coprod(h):
        i, j = divmod(h, d)
        # (l (x) 1) (x) (1 (x) l'), expanded in the basis
        out = {}
        for a, ca in enumerate(u):
            for b, cb in enumerate(u):
                if ca != 0 and cb != 0:
                    key = (i * d + a, b * d + j)
                    out[key] = out.get(key, 0) + ca * cb
        return out

    pi_L = Matrix.from_columns(field, d, [L.table[i][j] for i, j in itertools.product(range(d), repeat=2)])
    pi_R = Matrix.from_columns(field, d, [L.table[j][i] for i, j in itertools.product(range(d), repeat=2)])
    left = LeftBialgebroid(H, L, s_L, t_L, coprod, pi_L, name=name + "_L")
    right = RightBialgebroid(H, Lop, s_R, t_R, coprod, pi_R, name=name + "_R")
    S_cols = []
    for h in range(H.dim):
        i, j = divmod(h, d)
        v = [0] * H.dim
        v[j * d + i] = 1
        S_cols.append(v)
    return HopfAlgebroid(left, right, Matrix.from_columns(field, H.dim, S_cols), name=name)


def g2(field=None):
    field = field or Field()
    return enveloping_hopf(dual_numbers(field), name="G2")


def pair_groupoid_hopf(objects=2, field=None):
    """G4: groupoid algebra of the pair groupoid, as a Hopf algebroid.

    Basis e_(i,j) is the arrow j -> i.  Both base algebras are spanned by the
    identity arrows; the counits send an arrow to its target resp. source
    identity.
    """
    field = field or Field()
    m = objects
    arrows = [(i, j) for i in range(m) for j in range(m)]
    idx = {a: k for k, a in enumerate(arrows)}
    n = len(arrows)

    def prod(a, b):
        (i, j), (k, l) = arrows[a], arrows[b]
        v = [0] * n
        if j == k:
            v[idx[(i, l)]] = 1
        return v
    unit = [0] * n
    for i in range(m):
        unit[idx[(i, i)]] = 1
    H = algebra_from_function(field, n, prod, unit, ["e%d%d" % a for a in arrows], name="pair groupoid")

    def diag(i, j):
        v = [0] * m
        if i == j:
            v[i] = 1
        return v
    base = algebra_from_function(field, m, lambda i, j: diag(i, j), [1] * m,
                                 ["1_%d" % i for i in range(m)], name="identities")
    inc_cols = []
    for i in range(m):
        v = [0] * n
        v[idx[(i, i)]] = 1
        inc_cols.append(v)
    inc = Matrix.from_columns(field, n, inc_cols)
    target_id = Matrix.from_columns(field, m, [[1 if x == arrows[a][0] else 0 for x in range(m)] for a in range(n)])
    source_id = Matrix.from_columns(field, m, [[1 if x == arrows[a][1] else 0 for x in range(m)] for a in range(n)])
    one = field.one

    def coprod(a):
        return {(a, a): one}
    left = LeftBialgebroid(H, base, inc, inc, coprod, target_id, name="G4_L")
    right = RightBialgebroid(H, base, inc, inc, coprod, source_id, name="G4_R")
    S_cols = []
    for (i, j) in arrows:
        v = [0] * n
        v[idx[(j, i)]] = 1
        S_cols.append(v)
    return HopfAlgebroid(left, right, Matrix.from_columns(field, n, S_cols), name="G4")


def klein_four_hopf(field=None):
    """k[C2 x C2] with basis g^a h^b ordered (a, b) lexicographically."""
    field = field or Field()
    els = [(a, b) for a in range(2) for b in range(2)]
    H = group_algebra(field, els, lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2), (0, 0),
                      ["g^%dh^%d" % x for x in els], name="k[C2xC2]")
    one = field.one
    return hopf_from_bialgebra(H, lambda i: {(i, i): one}, [1] * 4,
                               [H.basis(i) for i in range(4)], name="k[C2xC2]")


def product_of_fields(field, m=2):
    """k x ... x k with orthogonal idempotent basis."""
    def prod(i, j):
        v = [0] * m
        if i == j:
            v[i] = 1
        return v
    return algebra_from_function(field, m, prod, [1] * m, ["e%d" % i for i in range(m)],
                                 name="k^%d" % m)


def swap_smash(field=None):
    """G3: (k x k) # k[C2] with the generator swapping the two idempotents.

    Returns ``(Hd, cocycle, crossed product)``; the cocycle is trivial.
    """
    from .crossed import Measuring, trivial_cocycle, build_crossed_product, solve_cocycle_inverse
    field = field or Field()
    Hd = cyclic_group_hopf(2, field)
    B = product_of_fields(field, 2)
    iota = unit_column(field, B)
    swap = Matrix(field, 2, 2, [[0, 1], [1, 0]])
    M = Measuring(Hd.left, B, iota, [Matrix.identity(field, 2), swap], name="swap")
    C = trivial_cocycle(M)
    C = C.with_inverse(solve_cocycle_inverse(C))
    return Hd, C, build_crossed_product(C, Hd=Hd, name="G3")


def klein_cocycle_values(field, twisted=True):
    """(-1)^(b c) on basis pairs (g^a h^b, g^c h^d), or all ones."""
    def sig(x, y):
        b, c = x % 2, y // 2
        return [field(-1) if (twisted and b * c) else field.one]
    return sig


def twisted_klein(field=None, twisted=True):
    """G5: k[C2 x C2] twisted by the bicharacter, as a crossed product over B = k.

    Returns ``(Hd, cocycle, crossed product)``.
    """
    from .crossed import Measuring, Cocycle, build_crossed_product, solve_cocycle_inverse
    field = field or Field()
    Hd = klein_four_hopf(field)
    B = ground_algebra(field)
    iota = unit_column(field, B)
    M = Measuring(Hd.left, B, iota, [Matrix.identity(field, 1)] * 4, name="trivial")
    C = Cocycle(M, klein_cocycle_values(field, twisted), name="bicharacter" if twisted else "trivial")
    C = C.with_inverse(solve_cocycle_inverse(C))
    return Hd, C, build_crossed_product(C, Hd=Hd, name="G5" if twisted else "G5 untwisted")


def sweedler_hopf(field=None):
    """Sweedler's H4 with basis g^a x^b at index a + 2b."""
    field = field or Field()

    def prod(i, j):
        a, b = i % 2, i // 2
        c, d = j % 2, j // 2
        v = [0] * 4
        if b + d < 2:
            v[(a + c) % 2 + 2 * (b + d)] = -1 if b * c else 1
        return v
    H = algebra_from_function(field, 4, prod, [1, 0, 0, 0], ["1", "g", "x", "gx"], name="H4")
    one = field.one
    cop = {0: {(0, 0): one}, 1: {(1, 1): one},
           2: {(2, 0): one, (1, 2): one}, 3: {(3, 1): one, (0, 3): one}}
    antipode = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
    return hopf_from_bialgebra(H, lambda i: cop[i], [1, 1, 0, 0], antipode, name="H4")


def sweedler_smash(field=None):
    """k[y]/(y^2) # H4 with g.y = -y and x.y = 1; returns ``(Hd, cocycle, crossed product)``."""
    from .crossed import Measuring, trivial_cocycle, build_crossed_product, solve_cocycle_inverse
    field = field or Field()
    Hd = sweedler_hopf(field)
    B = dual_numbers(field)
    iota = unit_column(field, B)
    acts = [Matrix.identity(field, 2), Matrix(field, 2, 2, [[1, 0], [0, -1]]),
            Matrix(field, 2, 2, [[0, 1], [0, 0]]), Matrix(field, 2, 2, [[0, 1], [0, 0]])]
    M = Measuring(Hd.left, B, iota, acts, name="sweedler")
    C = trivial_cocycle(M)
    C = C.with_inverse(solve_cocycle_inverse(C))
    return Hd, C, build_crossed_product(C, Hd=Hd, name="sweedler smash")


GALLERY_IDS = ("G1", "G1-regular", "G2", "G3", "G4", "G5", "G4-weak")


def build_gallery(ident, field=None, n=2):
    """Gallery entry by id.

    Returns a dict with at least ``hopf``; cleft instances also carry
    ``comodule_algebra``, ``eta_L`` and ``j`` (and ``crossed`` when built as
    a crossed product).
    """
    field = field or Field()
    ident = ident.upper()
    if int(n) != n or n < 1:
        raise ValueError("group order must be a positive integer, got %r" % (n,))
    if ident in ("G1", "G1-REGULAR"):
        Hd = cyclic_group_hopf(n, field)
    elif ident == "G2":
        Hd = g2(field)
    elif ident == "G4":
        Hd = pair_groupoid_hopf(2, field)
    elif ident == "G4-WEAK":
        Hd, W = pair_groupoid_weak(field)
        return {"id": "G4-weak", "hopf": Hd, "weak_cocycle": W}
    elif ident == "G3":
        Hd, C, P = swap_smash(field)
        return {"id": "G3", "hopf": Hd, "cocycle": C, "crossed": P,
                "comodule_algebra": P.comodule_algebra, "eta_L": P.eta_L(), "j": P.j()}
    elif ident in ("G5", "SWEEDLER"):
        Hd, C, P = twisted_klein(field) if ident == "G5" else sweedler_smash(field)
        return {"id": ident.lower() if ident == "SWEEDLER" else ident, "hopf": Hd, "cocycle": C, "crossed": P,
                "comodule_algebra": P.comodule_algebra, "eta_L": P.eta_L(), "j": P.j()}
    else:
        raise KeyError("unknown gallery instance %r" % ident)
    from .comodule import regular_comodule_algebra
    return {"id": ident if ident != "G1-REGULAR" else "G1-regular", "hopf": Hd,
            "comodule_algebra": regular_comodule_algebra(Hd), "eta_L": Hd.left.s,
            "j": Matrix.identity(field, Hd.H.dim)}


def pair_groupoid_weak(field=None):
    """Weak cocycle on the pair groupoid with a proper corner.

    B = k x k is measured by identity arrows through b -> b_i e_i and
    annihilated by the other arrows; sigma(e_ii, e_jj) = delta_ij e_i and
    zero elsewhere; x = x~ = 1.  Returns ``(Hd, weak cocycle)``.
    """
    from .crossed import Measuring, Cocycle
    from .weak import WeakCocycle
    field = field or Field()
    Hd = pair_groupoid_hopf(2, field)
    B = product_of_fields(field, 2)
    arrows = [(i, j) for i in range(2) for j in range(2)]

    def act(h, b):
        i, j = arrows[h]
        v = [field.zero] * 2
        if i == j == b:
            v[i] = field.one
        return v

    def sig(h, k):
        (i, j), (k1, k2) = arrows[h], arrows[k]
        v = [field.zero] * 2
        if i == j == k1 == k2:
            v[i] = field.one
        return v
    M = Measuring(Hd.left, B, Matrix.identity(field, 2), act, name="identity arrows")
    W = WeakCocycle(Cocycle(M, sig, name="diagonal"), B.unit, B.unit, name="G4 weak")
    return Hd, W
