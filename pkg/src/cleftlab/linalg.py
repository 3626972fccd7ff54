"""Exact linear algebra over the rationals or a prime field.

Scalars are python-flint ``fmpq`` / ``nmod`` values.  Row reduction is
delegated to flint; everything else (kernels, quotients, solving) is
read off the reduced row echelon form with leftmost pivoting, so results
are deterministic.
"""
import itertools
import re
import random as _random

import flint


class FieldError(ValueError):
    pass


class DimensionError(ValueError):
    pass


def _is_prime(p):
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


_RAT = re.compile(r"^-?\d+(/\d+)?$")


class Field:
    """The rationals (``p is None``) or the prime field F_p."""

    def __init__(self, p=None):
        if p is not None:
            p = int(p)
            if not _is_prime(p):
                raise FieldError("%d is not prime" % p)
        self.p = p

    @classmethod
    def from_name(cls, name):
        name = name.strip().lower()
        if name in ("q", "qq", "rationals"):
            return cls()
        if name.startswith("fp:"):
            try:
                return cls(int(name[3:]))
            except ValueError:
                raise FieldError("bad field name %r" % name) from None
        raise FieldError("bad field name %r" % name)

    @property
    def name(self):
        return "q" if self.p is None else "fp:%d" % self.p

    def __repr__(self):
        return "Field(%s)" % self.name

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __call__(self, x):
        if self.p is None:
            if isinstance(x, flint.fmpq):
                return x
            if isinstance(x, tuple):
                return flint.fmpq(*x)
            return flint.fmpq(x)
        if isinstance(x, flint.nmod):
            return x
        if isinstance(x, tuple):
            x = flint.fmpq(*x)
        if isinstance(x, flint.fmpq):
            return flint.nmod(int(x.p), self.p) / flint.nmod(int(x.q), self.p)
        return flint.nmod(int(x), self.p)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse(self, text):
        text = text.strip()
        if not _RAT.match(text):
            raise FieldError("malformed scalar %r" % text)
        if self.p is None:
            if "/" in text:
                num, den = text.split("/")
                if int(den) == 0:
                    raise FieldError("zero denominator in %r" % text)
                return flint.fmpq(int(num), int(den))
            return flint.fmpq(int(text))
        if "/" in text or text.startswith("-") or int(text) >= self.p:
            raise FieldError("%r is not a canonical residue mod %d" % (text, self.p))
        return flint.nmod(int(text), self.p)

    def fmt(self, x):
        return str(self(x))

    def random(self, rng, nonzero=False):
        while True:
            if self.p is None:
                x = flint.fmpq(rng.randint(-3, 3), rng.randint(1, 2))
            else:
                x = flint.nmod(rng.randrange(self.p), self.p)
            if not (nonzero and x == 0):
                return x

    def elements(self):
        if self.p is None:
            raise FieldError("the rationals cannot be enumerated")
        return [flint.nmod(i, self.p) for i in range(self.p)]

    def _flint_mat(self, rows, cols, entries):
        if self.p is None:
            return flint.fmpq_mat(rows, cols, entries)
        return flint.nmod_mat(rows, cols, [int(e) for e in entries], self.p)


def rref(field, rows, ncols):
    """Reduced row echelon form of a list of rows.

    Returns ``(nonzero_rows, pivots)``.
    """
    rows = [r for r in rows if any(x != 0 for x in r)]
    if not rows or ncols == 0:
        return [], []
    flat = [x for r in rows for x in r]
    M, rank = field._flint_mat(len(rows), ncols, flat).rref()
    out = []
    pivots = []
    for i in range(rank):
        row = [field(M[i, j]) for j in range(ncols)]
        out.append(row)
        pivots.append(next(j for j in range(ncols) if row[j] != 0))
    return out, pivots


class Matrix:
    """Dense matrix over a Field, stored as a list of rows."""

    def __init__(self, field, nrows, ncols, data=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if data is None:
            z = field.zero
            data = [[z] * ncols for _ in range(nrows)]
        else:
            data = [[field(x) for x in row] for row in data]
            if len(data) != nrows or any(len(r) != ncols for r in data):
                raise DimensionError("matrix data does not match %dx%d" % (nrows, ncols))
        self.rows = data

    @classmethod
    def identity(cls, field, n):
        M = cls(field, n, n)
        for i in range(n):
            M.rows[i][i] = field.one
        return M

    @classmethod
    def from_columns(cls, field, nrows, columns):
        M = cls(field, nrows, len(columns))
        for j, col in enumerate(columns):
            if len(col) != nrows:
                raise DimensionError("column length %d, expected %d" % (len(col), nrows))
            for i, x in enumerate(col):
                M.rows[i][j] = field(x)
        return M

    @classmethod
    def from_entries(cls, field, nrows, ncols, entries):
        if len(entries) != nrows * ncols:
            raise DimensionError("entries length %d != %d x %d" % (len(entries), nrows, ncols))
        return cls(field, nrows, ncols,
                   [entries[i * ncols:(i + 1) * ncols] for i in range(nrows)])

    @property
    def entries(self):
        return [x for r in self.rows for x in r]

    def col(self, j):
        return [r[j] for r in self.rows]

    def columns(self):
        return [self.col(j) for j in range(self.ncols)]

    def apply(self, vec):
        if len(vec) != self.ncols:
            raise DimensionError("vector length %d, expected %d" % (len(vec), self.ncols))
        z = self.field.zero
        out = []
        for r in self.rows:
            acc = z
            for a, b in zip(r, vec):
                if b != 0 and a != 0:
                    acc += a * b
            out.append(acc)
        return out

    @classmethod
    def _raw(cls, field, nrows, ncols, rows):
        M = cls.__new__(cls)
        M.field, M.nrows, M.ncols, M.rows = field, nrows, ncols, rows
        return M

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise DimensionError("cannot compose %dx%d with %dx%d"
                                 % (self.nrows, self.ncols, other.nrows, other.ncols))
        z = self.field.zero
        # sparse rows of the right factor; both factors are often mostly zero
        sparse = [[(j, b) for j, b in enumerate(r) if b != 0] for r in other.rows]
        out = []
        for r in self.rows:
            acc = [z] * other.ncols
            for k, a in enumerate(r):
                if a != 0:
                    for j, b in sparse[k]:
                        acc[j] += a * b
            out.append(acc)
        return Matrix._raw(self.field, self.nrows, other.ncols, out)

    def __add__(self, other):
        return Matrix(self.field, self.nrows, self.ncols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Matrix(self.field, self.nrows, self.ncols,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c):
        return Matrix(self.field, self.nrows, self.ncols, [[c * a for a in r] for r in self.rows])

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(str(x) for x in self.entries)))

    def __repr__(self):
        return "Matrix(%dx%d, %s)" % (self.nrows, self.ncols,
                                      [[str(x) for x in r] for r in self.rows])

    def copy(self):
        return Matrix(self.field, self.nrows, self.ncols, self.rows)

    def transpose(self):
        return Matrix.from_columns(self.field, self.ncols, self.rows)

    def rank(self):
        return len(rref(self.field, self.rows, self.ncols)[0])

    def is_zero(self):
        return all(x == 0 for x in self.entries)

    def inverse(self):
        """Inverse of a square matrix, or None when singular."""
        if self.nrows != self.ncols:
            return None
        n = self.nrows
        aug = [r + [self.field.one if i == j else self.field.zero for j in range(n)]
               for i, r in enumerate(self.rows)]
        R, piv = rref(self.field, aug, 2 * n)
        if piv[:n] != list(range(n)) or len(piv) < n:
            return None
        return Matrix(self.field, n, n, [r[n:] for r in R[:n]])


class Subspace:
    """Subspace of field^ambient_dim with an echelonized basis."""

    def __init__(self, field, ambient_dim, vectors=()):
        self.field = field
        self.ambient_dim = ambient_dim
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionError("vector length %d, expected %d" % (len(v), ambient_dim))
        self.basis, self.pivots = rref(field, [list(map(field, v)) for v in vectors], ambient_dim)

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, vec):
        v = list(vec)
        for row, p in zip(self.basis, self.pivots):
            c = v[p]
            if c != 0:
                v = [a - c * b for a, b in zip(v, row)]
        return all(x == 0 for x in v)

    def coordinates(self, vec):
        """Coefficients of vec in the echelon basis, or None if not a member."""
        if not self.contains(vec):
            return None
        return [vec[p] for p in self.pivots]

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __repr__(self):
        return "Subspace(dim %d in %d)" % (self.dim, self.ambient_dim)


def solve_linear(A, b):
    """Some x with A x = b (free variables zero), or None."""
    if len(b) != A.nrows:
        raise DimensionError("right-hand side length %d, expected %d" % (len(b), A.nrows))
    n = A.ncols
    aug = [r + [A.field(x)] for r, x in zip(A.rows, b)]
    R, piv = rref(A.field, aug, n + 1)
    if piv and piv[-1] == n:
        return None
    x = [A.field.zero] * n
    for row, p in zip(R, piv):
        x[p] = row[n]
    return x


def kernel(A):
    """Null space of A, one basis vector per free column."""
    R, piv = rref(A.field, A.rows, A.ncols)
    pivset = set(piv)
    vecs = []
    for f in range(A.ncols):
        if f in pivset:
            continue
        v = [A.field.zero] * A.ncols
        v[f] = A.field.one
        for row, p in zip(R, piv):
            v[p] = -row[f]
        vecs.append(v)
    return Subspace(A.field, A.ncols, vecs)


def image(A):
    return Subspace(A.field, A.nrows, A.columns())


class QuotientSpace:
    """field^ambient_dim modulo a relation subspace.

    The quotient basis is the set of non-pivot coordinate vectors; the
    section sends a quotient basis vector to that coordinate vector.
    """

    def __init__(self, relations):
        field = relations.field
        n = relations.ambient_dim
        self.field = field
        self.ambient_dim = n
        self.relations = relations
        pivset = set(relations.pivots)
        self.complement = [c for c in range(n) if c not in pivset]
        self.dim = len(self.complement)
        pos = {c: i for i, c in enumerate(self.complement)}
        self._pos = pos
        # sparse projection columns: ambient index -> {quotient index: coeff}
        cols = {}
        for c, i in pos.items():
            cols[c] = {i: field.one}
        for row, p in zip(relations.basis, relations.pivots):
            cols[p] = {pos[c]: -row[c] for c in self.complement if row[c] != 0}
        self.proj_cols = [cols[j] for j in range(n)]

    @property
    def projection(self):
        M = Matrix(self.field, self.dim, self.ambient_dim)
        for j, col in enumerate(self.proj_cols):
            for i, c in col.items():
                M.rows[i][j] = c
        return M

    @property
    def section(self):
        M = Matrix(self.field, self.ambient_dim, self.dim)
        for i, c in enumerate(self.complement):
            M.rows[c][i] = self.field.one
        return M

    def project(self, vec):
        out = [self.field.zero] * self.dim
        for j, x in enumerate(vec):
            if x != 0:
                for i, c in self.proj_cols[j].items():
                    out[i] += c * x
        return out

    def project_sparse(self, items):
        """Project a dict {ambient index: coeff}."""
        out = [self.field.zero] * self.dim
        for j, x in items.items():
            if x != 0:
                for i, c in self.proj_cols[j].items():
                    out[i] += c * x
        return out

    def lift(self, qvec):
        out = [self.field.zero] * self.ambient_dim
        for i, x in enumerate(qvec):
            out[self.complement[i]] = x
        return out


def quotient_by(ambient_dim, relations):
    if relations.ambient_dim != ambient_dim:
        raise DimensionError("relations live in dimension %d, not %d"
                             % (relations.ambient_dim, ambient_dim))
    return QuotientSpace(relations)


def _residual_system(field, nrows, ncols, residual):
    """Coefficient matrix and constant term of an affine residual."""
    zero = Matrix(field, nrows, ncols)
    r0 = residual(zero)
    columns = []
    for k in range(nrows * ncols):
        E = Matrix(field, nrows, ncols)
        E.rows[k // ncols][k % ncols] = field.one
        columns.append([a - b for a, b in zip(residual(E), r0)])
    A = Matrix.from_columns(field, len(r0), columns) if columns else Matrix(field, len(r0), 0)
    return A, r0


def obstruction_certificate(field, nrows, ncols, residual):
    """Positions of residual equations whose combination reads 0 = c with c nonzero.

    Returns None when residual(X) == 0 is solvable.
    """
    A, r0 = _residual_system(field, nrows, ncols, residual)
    for y in kernel(A.transpose()).basis:
        if sum((a * b for a, b in zip(y, r0)), field.zero) != 0:
            return tuple(i for i, a in enumerate(y) if a != 0)
    return None


def solve_unknown_map(field, nrows, ncols, residual):
    """Solve for a matrix X (nrows x ncols) with residual(X) == 0.

    ``residual`` must be affine in X and return a flat list of scalars.
    Returns ``(particular, kernel_basis)`` where kernel_basis is a list of
    matrices spanning the homogeneous solutions, or None if inconsistent.
    """
    A, r0 = _residual_system(field, nrows, ncols, residual)
    if not r0 and A.ncols == 0:
        return Matrix(field, nrows, ncols), []
    x = solve_linear(A, [-v for v in r0])
    if x is None:
        return None
    K = kernel(A)
    part = Matrix.from_entries(field, nrows, ncols, x)
    kers = [Matrix.from_entries(field, nrows, ncols, v) for v in K.basis]
    return part, kers


def solve_matrix_equations(field, nrows, ncols, equations):
    """Solve sum_k P_k X Q_k = R for every equation ``([(P_k, Q_k), ...], R)``.

    A factor given as None stands for the identity.  Returns
    ``(particular, kernel_basis)`` like :func:`solve_unknown_map`, or None.
    """
    rows = []
    rhs = []
    for terms, R in equations:
        m = R.nrows
        c = R.ncols
        block = {}
        for P, Q in terms:
            pe = ([(i, i, field.one) for i in range(nrows)] if P is None else
                  [(i, a, x) for i, r in enumerate(P.rows) for a, x in enumerate(r) if x != 0])
            qe = ([(b, b, field.one) for b in range(ncols)] if Q is None else
                  [(b, j, x) for b, r in enumerate(Q.rows) for j, x in enumerate(r) if x != 0])
            for i, a, x in pe:
                for b, j, y in qe:
                    key = (i * c + j, a * ncols + b)
                    block[key] = block.get(key, field.zero) + x * y
        base = len(rows)
        rows.extend([field.zero] * (nrows * ncols) for _ in range(m * c))
        for (r, k), v in block.items():
            rows[base + r][k] = v
        rhs.extend(R.entries)
    n = nrows * ncols
    if not rows:
        units = [Matrix.from_entries(field, nrows, ncols, [field.one if i == k else field.zero
                                                          for i in range(n)]) for k in range(n)]
        return Matrix(field, nrows, ncols), units
    A = Matrix._raw(field, len(rows), n, rows)
    x = solve_linear(A, rhs)
    if x is None:
        return None
    K = kernel(A)
    return (Matrix.from_entries(field, nrows, ncols, x),
            [Matrix.from_entries(field, nrows, ncols, v) for v in K.basis])


def equation_residual(equations, X):
    """Flat residual of a list of matrix equations at X."""
    out = []
    for terms, R in equations:
        acc = R.scale(-R.field.one)
        for P, Q in terms:
            Y = X if P is None else P @ X
            acc = acc + (Y if Q is None else Y @ Q)
        out.extend(acc.entries)
    return out


def random_combination(field, particular, kernel_basis, rng):
    X = particular.copy()
    for K in kernel_basis:
        c = field.random(rng)
        X = X + K.scale(c)
    return X


def affine_candidates(field, part, ker, rng, samples, enumerate_limit):
    """Candidate points of an affine space; second value says whether the list is exhaustive."""
    if not ker:
        return [part], True
    if field.p is not None and field.p ** len(ker) <= enumerate_limit:
        out = []
        for coeffs in itertools.product(field.elements(), repeat=len(ker)):
            X = part
            for c, K in zip(coeffs, ker):
                if c != 0:
                    X = X + K.scale(c)
            out.append(X)
        return out, True
    return [part] + [random_combination(field, part, ker, rng) for _ in range(samples)], False


def default_rng(seed=0):
    return _random.Random(seed)
