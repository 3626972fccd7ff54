"""Finite-dimensional algebras, bimodules and balanced tensor spaces.

Elements of an algebra or module are dense coordinate lists.  Elements of
a (possibly iterated) tensor product are handled in two forms: quotient
coordinates (a dense list in the basis of the quotient) and ambient terms,
a dict mapping index tuples to scalars.  Multilinear formulas are evaluated
on ambient terms and projected at the end.
"""
import itertools

from .linalg import Matrix, Subspace, QuotientSpace, DimensionError, rref
from .report import Report


class Algebra:
    """Unital associative algebra given by structure constants.

    ``table[i][j]`` is the coordinate vector of the product of basis
    elements i and j.
    """

    def __init__(self, field, dim, table, unit, labels=None, name=""):
        self.field = field
        self.dim = dim
        if len(table) != dim or any(len(row) != dim for row in table):
            raise DimensionError("multiplication table is not %d x %d" % (dim, dim))
        self.table = [[[field(x) for x in v] for v in row] for row in table]
        for row in self.table:
            for v in row:
                if len(v) != dim:
                    raise DimensionError("product vector of wrong length")
        if len(unit) != dim:
            raise DimensionError("unit vector of wrong length")
        self.unit = [field(x) for x in unit]
        self.labels = list(labels) if labels else ["e%d" % i for i in range(dim)]
        self.name = name
        self._sparse = [[[(k, c) for k, c in enumerate(v) if c != 0] for v in row]
                        for row in self.table]

    def __repr__(self):
        return "Algebra(%s, dim %d)" % (self.name or "?", self.dim)

    def same_as(self, other):
        return (self.field == other.field and self.dim == other.dim
                and self.table == other.table and self.unit == other.unit)

    def zero(self):
        return [self.field.zero] * self.dim

    def basis(self, i):
        v = self.zero()
        v[i] = self.field.one
        return v

    def mul(self, x, y):
        out = self.zero()
        for i, a in enumerate(x):
            if a == 0:
                continue
            row = self._sparse[i]
            for j, b in enumerate(y):
                if b == 0:
                    continue
                ab = a * b
                for k, c in row[j]:
                    out[k] += ab * c
        return out

    def mul_many(self, *xs):
        out = self.unit
        for x in xs:
            out = self.mul(out, x)
        return out

    def left_mul(self, x):
        return Matrix.from_columns(self.field, self.dim,
                                   [self.mul(x, self.basis(j)) for j in range(self.dim)])

    def right_mul(self, x):
        return Matrix.from_columns(self.field, self.dim,
                                   [self.mul(self.basis(j), x) for j in range(self.dim)])

    def is_commutative(self):
        return all(self.table[i][j] == self.table[j][i]
                   for i in range(self.dim) for j in range(self.dim))

    def center(self):
        """Center as a Subspace."""
        from .linalg import kernel
        rows = []
        for i in range(self.dim):
            M = self.left_mul(self.basis(i)) - self.right_mul(self.basis(i))
            rows.extend(M.rows)
        return kernel(Matrix(self.field, len(rows), self.dim, rows))

    def subalgebra(self, sub, name=""):
        """Algebra structure on a subspace closed under products.

        Returns ``(algebra, inclusion matrix)``; raises ValueError when the
        subspace is not a unital subalgebra.
        """
        basis = sub.basis
        d = len(basis)
        table = []
        for x in basis:
            row = []
            for y in basis:
                c = sub.coordinates(self.mul(x, y))
                if c is None:
                    raise ValueError("subspace not closed under multiplication")
                row.append(c)
            table.append(row)
        u = sub.coordinates(self.unit)
        if u is None:
            raise ValueError("subspace does not contain the unit")
        inc = Matrix.from_columns(self.field, self.dim, basis) if d else Matrix(self.field, self.dim, 0)
        return Algebra(self.field, d, table, u, name=name), inc


def validate_algebra(A):
    rep = Report("algebra " + (A.name or ""))
    n = A.dim
    e = A.basis

    def assoc():
        for i, j, k in itertools.product(range(n), repeat=3):
            if A.mul(A.mul(e(i), e(j)), e(k)) != A.mul(e(i), A.mul(e(j), e(k))):
                yield (i, j, k)

    def unit():
        for i in range(n):
            if A.mul(A.unit, e(i)) != e(i) or A.mul(e(i), A.unit) != e(i):
                yield (i,)

    rep.expect_none("associativity", assoc())
    rep.expect_none("unit", unit())
    return rep


def opposite(A):
    n = A.dim
    table = [[A.table[j][i] for j in range(n)] for i in range(n)]
    return Algebra(A.field, n, table, A.unit, A.labels, name=(A.name + "^op") if A.name else "")


def tensor_algebra(A, B):
    if A.field != B.field:
        raise ValueError("field mismatch")
    n, m = A.dim, B.dim
    table = []
    for i1, j1 in itertools.product(range(n), range(m)):
        row = []
        for i2, j2 in itertools.product(range(n), range(m)):
            u = A.table[i1][i2]
            v = B.table[j1][j2]
            row.append([a * b for a in u for b in v])
        table.append(row)
    unit = [a * b for a in A.unit for b in B.unit]
    labels = ["%s*%s" % (a, b) for a in A.labels for b in B.labels]
    return Algebra(A.field, n * m, table, unit, labels)


def algebra_from_function(field, dim, product, unit, labels=None, name=""):
    """Build an Algebra from ``product(i, j) -> coordinate list``."""
    table = [[product(i, j) for j in range(dim)] for i in range(dim)]
    return Algebra(field, dim, table, unit, labels, name)


class AlgebraMap:
    def __init__(self, source, target, matrix):
        if matrix.nrows != target.dim or matrix.ncols != source.dim:
            raise DimensionError("algebra map matrix has wrong shape")
        self.source = source
        self.target = target
        self.matrix = matrix

    def __call__(self, v):
        return self.matrix.apply(v)


def check_algebra_map(source, target, matrix, anti=False, name="algebra map"):
    """Report for unitality and (anti-)multiplicativity of a linear map."""
    rep = Report(name)
    f = matrix.apply
    rep.expect("unital", f(source.unit) == target.unit)

    def mult():
        for i, j in itertools.product(range(source.dim), repeat=2):
            x, y = source.basis(i), source.basis(j)
            lhs = f(source.mul(x, y))
            rhs = target.mul(f(y), f(x)) if anti else target.mul(f(x), f(y))
            if lhs != rhs:
                yield (i, j)

    rep.expect_none("anti-multiplicative" if anti else "multiplicative", mult())
    return rep


class Bimodule:
    """A space with left and right actions, one matrix per ring basis element."""

    def __init__(self, left_ring, right_ring, dim, left_action, right_action):
        self.left_ring = left_ring
        self.right_ring = right_ring
        self.dim = dim
        self.left_action = list(left_action)
        self.right_action = list(right_action)

    @classmethod
    def regular(cls, A):
        return cls(A, A, A.dim, [A.left_mul(A.basis(i)) for i in range(A.dim)],
                   [A.right_mul(A.basis(i)) for i in range(A.dim)])


def act(mats, ring_vec, vec):
    """Apply the action of a ring element (given in coordinates)."""
    out = [vec[0] * 0 for _ in vec] if vec else []
    for p, c in enumerate(ring_vec):
        if c != 0:
            w = mats[p].apply(vec)
            out = [a + c * b for a, b in zip(out, w)]
    return out


def validate_bimodule(M):
    rep = Report("bimodule")
    L, R = M.left_ring, M.right_ring
    e = lambda i: [M.left_ring.field.one if k == i else M.left_ring.field.zero for k in range(M.dim)]
    rep.expect("left unital", all(act(M.left_action, L.unit, e(m)) == e(m) for m in range(M.dim)))
    rep.expect("right unital", all(act(M.right_action, R.unit, e(m)) == e(m) for m in range(M.dim)))

    def lassoc():
        for p, q, m in itertools.product(range(L.dim), range(L.dim), range(M.dim)):
            lhs = act(M.left_action, L.mul(L.basis(p), L.basis(q)), e(m))
            rhs = M.left_action[p].apply(M.left_action[q].apply(e(m)))
            if lhs != rhs:
                yield (p, q, m)

    def rassoc():
        for m, p, q in itertools.product(range(M.dim), range(R.dim), range(R.dim)):
            lhs = act(M.right_action, R.mul(R.basis(p), R.basis(q)), e(m))
            rhs = M.right_action[q].apply(M.right_action[p].apply(e(m)))
            if lhs != rhs:
                yield (m, p, q)

    def commute():
        for p, m, q in itertools.product(range(L.dim), range(M.dim), range(R.dim)):
            if (M.left_action[p].apply(M.right_action[q].apply(e(m)))
                    != M.right_action[q].apply(M.left_action[p].apply(e(m)))):
                yield (p, m, q)

    rep.expect_none("left action associative", lassoc())
    rep.expect_none("right action associative", rassoc())
    rep.expect_none("actions commute", commute())
    return rep


# ---------------------------------------------------------------- tensors

_SPACE_CACHE = {}


def _mats_key(mats):
    return tuple((m.nrows, m.ncols, tuple(str(x) for x in m.entries)) for m in mats)


class TensorSpace:
    """Flat tensor product of factor spaces modulo adjacent balancings.

    ``gaps[i]`` is None (tensor over the ground field) or a pair
    ``(right_mats, left_mats)``: the right action of each base-ring basis
    element on factor i and the left action on factor i+1.  The relations
    (m.p) x n - m x (p.n) are imposed at every gap, tensored with the full
    bases of the remaining factors.
    """

    def __new__(cls, field, dims, gaps):
        key = (field, tuple(dims),
               tuple(None if g is None else (_mats_key(g[0]), _mats_key(g[1])) for g in gaps))
        hit = _SPACE_CACHE.get(key)
        if hit is not None:
            return hit
        self = super().__new__(cls)
        self._init(field, dims, gaps)
        _SPACE_CACHE[key] = self
        return self

    def _init(self, field, dims, gaps):
        if len(gaps) != len(dims) - 1:
            raise DimensionError("need one gap per adjacent pair of factors")
        self.field = field
        self.dims = tuple(dims)
        self.gaps = list(gaps)
        self.ambient_dim = 1
        for d in dims:
            self.ambient_dim *= d
        self._strides = []
        s = 1
        for d in reversed(dims):
            self._strides.append(s)
            s *= d
        self._strides.reverse()
        rows = []
        self._gap_relations = []
        for i, gap in enumerate(gaps):
            pair_rel = self._pair_relations(i, gap)
            self._gap_relations.append(pair_rel)
            for rel in pair_rel:
                for other in self._others(i):
                    row = [field.zero] * self.ambient_dim
                    for (a, b), c in rel.items():
                        t = other[:i] + (a, b) + other[i:]
                        row[self.index(t)] += c
                    rows.append(row)
        self.quotient = QuotientSpace(Subspace(field, self.ambient_dim, rows))
        self.dim = self.quotient.dim

    def _pair_relations(self, i, gap):
        """Echelonized relations on factors i, i+1 as dicts {(a, b): c}."""
        if gap is None:
            return []
        right_mats, left_mats = gap
        d1, d2 = self.dims[i], self.dims[i + 1]
        rows = []
        for R, L in zip(right_mats, left_mats):
            for a, b in itertools.product(range(d1), range(d2)):
                row = [self.field.zero] * (d1 * d2)
                for a2 in range(d1):
                    c = R.rows[a2][a]
                    if c != 0:
                        row[a2 * d2 + b] += c
                for b2 in range(d2):
                    c = L.rows[b2][b]
                    if c != 0:
                        row[a * d2 + b2] -= c
                rows.append(row)
        red, _ = rref(self.field, rows, d1 * d2)
        return [{divmod(k, d2): c for k, c in enumerate(r) if c != 0} for r in red]

    def _others(self, i):
        ranges = [range(d) for k, d in enumerate(self.dims) if k not in (i, i + 1)]
        return itertools.product(*ranges)

    def index(self, t):
        return sum(a * s for a, s in zip(t, self._strides))

    def tuple_of(self, idx):
        out = []
        for s in self._strides:
            a, idx = divmod(idx, s)
            out.append(a)
        return tuple(out)

    def relation_terms(self):
        """Generators of the relation space as ambient term dicts."""
        for i, rels in enumerate(self._gap_relations):
            for rel in rels:
                for other in self._others(i):
                    yield {other[:i] + ab + other[i:]: c for ab, c in rel.items()}

    def project(self, terms):
        """Quotient coordinates of an ambient term dict."""
        return self.quotient.project_sparse({self.index(t): c for t, c in terms.items()})

    def lift(self, qvec):
        return {self.tuple_of(self.quotient.complement[i]): c
                for i, c in enumerate(qvec) if c != 0}

    def basis_terms(self, q):
        return {self.tuple_of(self.quotient.complement[q]): self.field.one}

    def pure(self, *vecs):
        """Project the pure tensor of dense factor vectors."""
        return self.project(pure_terms(*vecs))

    def __repr__(self):
        return "TensorSpace(dims=%s, dim=%d)" % (self.dims, self.dim)


def plain_space(field, dims):
    return TensorSpace(field, dims, [None] * (len(dims) - 1))


def balanced_tensor(M, N, over):
    """M (x)_over N for bimodules M (right over-module) and N (left over-module)."""
    if M.right_ring is not over and not M.right_ring.same_as(over):
        raise ValueError("left factor is not a right module over the given ring")
    if N.left_ring is not over and not N.left_ring.same_as(over):
        raise ValueError("right factor is not a left module over the given ring")
    return TensorSpace(over.field, [M.dim, N.dim], [(M.right_action, N.left_action)])


def induce_map_on_quotient(f, src, tgt):
    """Induce an ambient matrix f (tgt ambient x src ambient) on quotients.

    Returns the quotient matrix, or None when f does not send relations of
    ``src`` into relations of ``tgt``.
    """
    for rel in src.relation_terms():
        img = [src.field.zero] * f.nrows
        for t, c in rel.items():
            j = src.index(t)
            for i in range(f.nrows):
                if f.rows[i][j] != 0:
                    img[i] += c * f.rows[i][j]
        if any(x != 0 for x in tgt.quotient.project(img)):
            return None
    cols = []
    for q in range(src.dim):
        amb = src.quotient.lift([src.field.one if k == q else src.field.zero
                                 for k in range(src.dim)])
        cols.append(tgt.quotient.project(f.apply(amb)))
    return Matrix.from_columns(src.field, tgt.dim, cols)


def takeuchi_product(space, left_mats, right_mats, which=1):
    """Subspace of a two-fold tensor space of Takeuchi-type elements.

    Members satisfy sum x.left_mats[p] (x) y == sum x (x) y.right_mats[p]
    for every base basis element p, where left_mats act on the first
    factor and right_mats on the second.
    """
    from .linalg import kernel
    field = space.field
    rows_per_q = []
    for L, R in zip(left_mats, right_mats):
        cols = []
        for q in range(space.dim):
            terms = space.basis_terms(q)
            a = apply_factor(terms, 0, L)
            b = apply_factor(terms, 1, R)
            cols.append(sub_vec(space.project(a), space.project(b)))
        rows_per_q.append(Matrix.from_columns(field, space.dim, cols))
    if not rows_per_q:
        return Subspace(field, space.dim, Matrix.identity(field, space.dim).rows)
    rows = [r for M in rows_per_q for r in M.rows]
    return kernel(Matrix(field, len(rows), space.dim, rows))


# ------------------------------------------------------- term arithmetic

def pure_terms(*vecs):
    out = {(): 1}
    for v in vecs:
        new = {}
        for t, c in out.items():
            for i, x in enumerate(v):
                if x != 0:
                    new[t + (i,)] = c * x
        out = new
    return out


def vec_terms(v):
    return {(i,): x for i, x in enumerate(v) if x != 0}


def add_terms(target, terms, scale=None):
    for t, c in terms.items():
        v = c if scale is None else c * scale
        if t in target:
            target[t] += v
        else:
            target[t] = v
    return target


def expand(terms, factor_fns):
    """Apply per-factor functions to ambient terms.

    ``factor_fns[k]`` maps a basis index of factor k to a term dict whose
    keys are tuples (possibly of length 0, 1, 2, ...); None means identity.
    The output keys are the concatenations.
    """
    out = {}
    for t, c in terms.items():
        acc = {(): c}
        for k, a in enumerate(t):
            fn = factor_fns[k]
            img = {(a,): 1} if fn is None else fn(a)
            new = {}
            for u, x in acc.items():
                for w, y in img.items():
                    key = u + w
                    v = x * y
                    if key in new:
                        new[key] += v
                    else:
                        new[key] = v
            acc = new
        add_terms(out, acc)
    return out


def apply_factor(terms, k, M):
    """Apply a matrix to factor k of ambient terms."""
    cols = {}
    out = {}
    for t, c in terms.items():
        a = t[k]
        if a not in cols:
            cols[a] = [(i, x) for i, x in enumerate(M.col(a)) if x != 0]
        for i, x in cols[a]:
            key = t[:k] + (i,) + t[k + 1:]
            v = c * x
            if key in out:
                out[key] += v
            else:
                out[key] = v
    return out


def matrix_fn(M):
    """Factor function from a matrix: basis index -> image terms."""
    cache = {}

    def fn(a):
        if a not in cache:
            cache[a] = {(i,): x for i, x in enumerate(M.col(a)) if x != 0}
        return cache[a]
    return fn


def lifted_fn(M, space):
    """Factor function for a map into a tensor space: basis index -> lifted image."""
    cache = {}

    def fn(a):
        if a not in cache:
            cache[a] = space.lift(M.col(a))
        return cache[a]
    return fn


def contract(terms, field, dim, fn):
    """Sum over terms of c * fn(tuple) where fn returns a dense vector."""
    out = [field.zero] * dim
    for t, c in terms.items():
        v = fn(t)
        for i, x in enumerate(v):
            if x != 0:
                out[i] += c * x
    return out


def product_of_factors(alg, vec_fns):
    """Function tuple -> product in ``alg`` of vec_fns[k](t[k])."""
    def fn(t):
        out = alg.unit
        for k, a in enumerate(t):
            out = alg.mul(out, vec_fns[k](a))
        return out
    return fn


def sub_vec(x, y):
    return [a - b for a, b in zip(x, y)]


def add_vec(x, y):
    return [a + b for a, b in zip(x, y)]


def scale_vec(c, x):
    return [c * a for a in x]


def is_zero(v):
    return all(x == 0 for x in v)


def first_index(v):
    for i, x in enumerate(v):
        if x != 0:
            return i
    return None
