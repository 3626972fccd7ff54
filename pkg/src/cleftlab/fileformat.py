"""Line-oriented structure files.

Format (one statement per line, ``#`` starts a comment)::

    cleftlab-structure 1
    field q                      # or fp:<p>
    algebra <name> <dim>
    label <name> <i> <text>
    unit <name> <scalars...>
    product <name> <i> <j> <scalars...>
    matrix <name> <rows> <cols>
    row <name> <i> <scalars...>
    bind <role> <name>

Scalars are exact strings (``-3/4``; canonical residues for fp).  The
serializer writes every product and row, in index order, so that
serialize(load(serialize(x))) is byte-identical.

Roles: H, L, R, s_L, t_L, delta_L, eps_L, s_R, t_R, delta_R, eps_R, S for
the Hopf algebroid; A, eta_R, rho_R, rho_L, eta_L, j (and optional j_inv)
for a comodule algebra with a cleaving map; B, iota, action, sigma (and
optional sigma_inv, x, x_tilde) for a crossed product datum.  ``action``
stacks the matrices of the basis elements of H vertically.
"""
from .algebra import Algebra
from .bialgebroid import LeftBialgebroid, RightBialgebroid
from .hopf import HopfAlgebroid
from .linalg import Field, FieldError, Matrix, DimensionError

MAGIC = "cleftlab-structure"
VERSION = 1

HOPF_ROLES = ("H", "L", "R", "s_L", "t_L", "delta_L", "eps_L", "s_R", "t_R", "delta_R", "eps_R", "S")
CLEFT_ROLES = ("A", "eta_R", "rho_R", "rho_L", "eta_L", "j")
CROSSED_ROLES = ("B", "iota", "action", "sigma")


class StructureError(ValueError):
    pass


class ParseError(StructureError):
    def __init__(self, message, line=None, column=None):
        where = "" if line is None else " (line %d%s)" % (line, "" if column is None else ", column %d" % column)
        super().__init__(message + where)
        self.line = line
        self.column = column


class UnresolvedBindingError(StructureError):
    pass


class DimensionMismatchError(StructureError):
    pass


# ---------------------------------------------------------------- parsing

class _Doc:
    def __init__(self):
        self.field = None
        self.algebras = {}
        self.matrices = {}
        self.bindings = {}


def _column(raw, token_index):
    """1-based column of the token with the given index in a raw line."""
    pos = 0
    for k, tok in enumerate(raw.split()):
        pos = raw.index(tok, pos)
        if k == token_index:
            return pos + 1
        pos += len(tok)
    return None


def _int(tok, raw, k, lineno):
    try:
        v = int(tok)
    except ValueError:
        raise ParseError("expected an integer, got %r" % tok, lineno, _column(raw, k))
    if v < 0:
        raise ParseError("negative index %r" % tok, lineno, _column(raw, k))
    return v


def _scalars(doc, toks, start, raw, lineno):
    out = []
    for k in range(start, len(toks)):
        try:
            out.append(doc.field.parse(toks[k]))
        except FieldError as e:
            raise ParseError(str(e), lineno, _column(raw, k))
    return out


def parse_structure(text):
    """Parse structure text into algebras, matrices and bindings (a _Doc)."""
    doc = _Doc()
    header = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        if not header:
            if toks[0] != MAGIC or len(toks) != 2:
                raise ParseError("missing header %r" % MAGIC, lineno, 1)
            if toks[1] != str(VERSION):
                raise ParseError("unsupported version %r" % toks[1], lineno, _column(raw, 1))
            header = True
            continue
        kw = toks[0]
        if kw == "field":
            if len(toks) != 2:
                raise ParseError("field takes one argument", lineno)
            try:
                doc.field = Field.from_name(toks[1])
            except FieldError as e:
                raise ParseError(str(e), lineno, _column(raw, 1))
            continue
        if doc.field is None:
            raise ParseError("field must be declared before %r" % kw, lineno, 1)
        if kw in ("algebra", "matrix"):
            want = 3 if kw == "algebra" else 4
            if len(toks) != want:
                raise ParseError("%s takes %d arguments" % (kw, want - 1), lineno)
            name = toks[1]
            if name in doc.algebras or name in doc.matrices:
                raise ParseError("duplicate name %r" % name, lineno, _column(raw, 1))
            if kw == "algebra":
                d = _int(toks[2], raw, 2, lineno)
                doc.algebras[name] = {"dim": d, "labels": {}, "unit": None, "table": {}, "line": lineno}
            else:
                r, c = _int(toks[2], raw, 2, lineno), _int(toks[3], raw, 3, lineno)
                doc.matrices[name] = {"rows": r, "cols": c, "data": {}, "line": lineno}
            continue
        if kw in ("label", "unit", "product"):
            if len(toks) < 2 or toks[1] not in doc.algebras:
                raise UnresolvedBindingError("line %d: unknown algebra %r" % (lineno, toks[1] if len(toks) > 1 else ""))
            alg = doc.algebras[toks[1]]
            d = alg["dim"]
            if kw == "label":
                if len(toks) != 4:
                    raise ParseError("label takes an index and a text", lineno)
                alg["labels"][_int(toks[2], raw, 2, lineno)] = toks[3]
            elif kw == "unit":
                v = _scalars(doc, toks, 2, raw, lineno)
                if len(v) != d:
                    raise DimensionMismatchError("line %d: unit of %r has %d entries, expected %d"
                                                 % (lineno, toks[1], len(v), d))
                alg["unit"] = v
            else:
                if len(toks) < 4:
                    raise ParseError("product needs two indices", lineno)
                i, j = _int(toks[2], raw, 2, lineno), _int(toks[3], raw, 3, lineno)
                v = _scalars(doc, toks, 4, raw, lineno)
                if i >= d or j >= d or len(v) != d:
                    raise DimensionMismatchError("line %d: product entry does not fit dimension %d"
                                                 % (lineno, d))
                alg["table"][i, j] = v
            continue
        if kw == "row":
            if len(toks) < 3 or toks[1] not in doc.matrices:
                raise UnresolvedBindingError("line %d: unknown matrix %r" % (lineno, toks[1] if len(toks) > 1 else ""))
            m = doc.matrices[toks[1]]
            i = _int(toks[2], raw, 2, lineno)
            v = _scalars(doc, toks, 3, raw, lineno)
            if i >= m["rows"] or len(v) != m["cols"]:
                raise DimensionMismatchError("line %d: row does not fit a %dx%d matrix"
                                             % (lineno, m["rows"], m["cols"]))
            m["data"][i] = v
            continue
        if kw == "bind":
            if len(toks) != 3:
                raise ParseError("bind takes a role and a name", lineno)
            doc.bindings[toks[1]] = toks[2]
            continue
        raise ParseError("unknown statement %r" % kw, lineno, _column(raw, 0))
    if not header:
        raise ParseError("empty structure file", None)
    if doc.field is None:
        raise ParseError("no field declared", None)
    return doc


def _algebra(doc, role):
    name = doc.bindings.get(role)
    if name is None:
        raise UnresolvedBindingError("role %r is not bound" % role)
    if name not in doc.algebras:
        raise UnresolvedBindingError("role %r bound to unknown algebra %r" % (role, name))
    a = doc.algebras[name]
    d = a["dim"]
    if a["unit"] is None:
        raise DimensionMismatchError("algebra %r has no unit" % name)
    missing = [(i, j) for i in range(d) for j in range(d) if (i, j) not in a["table"]]
    if missing:
        raise DimensionMismatchError("algebra %r misses the product of %s" % (name, missing[0]))
    table = [[a["table"][i, j] for j in range(d)] for i in range(d)]
    labels = [a["labels"].get(i, "e%d" % i) for i in range(d)]
    return Algebra(doc.field, d, table, a["unit"], labels, name=name)


def _matrix(doc, role, shape=None):
    name = doc.bindings.get(role)
    if name is None:
        raise UnresolvedBindingError("role %r is not bound" % role)
    if name not in doc.matrices:
        raise UnresolvedBindingError("role %r bound to unknown matrix %r" % (role, name))
    m = doc.matrices[name]
    if len(m["data"]) != m["rows"]:
        raise DimensionMismatchError("matrix %r has %d of %d rows" % (name, len(m["data"]), m["rows"]))
    if shape is not None and (m["rows"], m["cols"]) != tuple(shape):
        raise DimensionMismatchError("role %r needs shape %dx%d, matrix %r is %dx%d"
                                     % (role, shape[0], shape[1], name, m["rows"], m["cols"]))
    return Matrix(doc.field, m["rows"], m["cols"], [m["data"][i] for i in range(m["rows"])])


def _wrap(fn, *args):
    try:
        return fn(*args)
    except DimensionError as e:
        raise DimensionMismatchError(str(e))


def bind_structure(doc):
    """Build the objects named by the role bindings.

    Returns a dict with ``hopf`` and, when bound, ``comodule_algebra``,
    ``eta_L``, ``j``, ``j_inv``, ``cocycle`` and ``weak_cocycle``.
    """
    H, L, R = _algebra(doc, "H"), _algebra(doc, "L"), _algebra(doc, "R")
    n = H.dim
    sL, tL = _matrix(doc, "s_L", (n, L.dim)), _matrix(doc, "t_L", (n, L.dim))
    sR, tR = _matrix(doc, "s_R", (n, R.dim)), _matrix(doc, "t_R", (n, R.dim))
    eL, eR = _matrix(doc, "eps_L", (L.dim, n)), _matrix(doc, "eps_R", (R.dim, n))
    dL, dR = _matrix(doc, "delta_L"), _matrix(doc, "delta_R")
    left = _wrap(LeftBialgebroid, H, L, sL, tL, dL, eL)
    right = _wrap(RightBialgebroid, H, R, sR, tR, dR, eR)
    for bgd, d in ((left, dL), (right, dR)):
        if (d.nrows, d.ncols) != (bgd.HH.dim, n):
            raise DimensionMismatchError("coproduct needs shape %dx%d" % (bgd.HH.dim, n))
    Hd = HopfAlgebroid(left, right, _matrix(doc, "S", (n, n)), name=doc.bindings.get("H", ""))
    out = {"hopf": Hd}
    if "A" in doc.bindings:
        from .comodule import ComoduleAlgebra
        A = _algebra(doc, "A")
        etaR = _matrix(doc, "eta_R", (A.dim, R.dim))
        rhoR, rhoL = _matrix(doc, "rho_R"), _matrix(doc, "rho_L")
        CA = _wrap(ComoduleAlgebra, Hd, A, etaR, rhoR, rhoL)
        out["comodule_algebra"] = CA
        out["eta_L"] = _matrix(doc, "eta_L", (A.dim, L.dim))
        out["j"] = _matrix(doc, "j", (A.dim, n))
        if "j_inv" in doc.bindings:
            out["j_inv"] = _matrix(doc, "j_inv", (A.dim, n))
    if "B" in doc.bindings:
        from .crossed import Measuring, Cocycle
        B = _algebra(doc, "B")
        d = B.dim
        iota = _matrix(doc, "iota", (d, L.dim))
        stacked = _matrix(doc, "action", (n * d, d))
        acts = [Matrix(doc.field, d, d, stacked.rows[h * d:(h + 1) * d]) for h in range(n)]
        M = Measuring(left, B, iota, acts)
        sig = _matrix(doc, "sigma", (d, n * n))
        sinv = _matrix(doc, "sigma_inv", (d, n * n)) if "sigma_inv" in doc.bindings else None
        C = Cocycle(M, sig, sinv)
        if "x" in doc.bindings:
            from .weak import WeakCocycle
            x = _matrix(doc, "x", (d, 1)).col(0)
            xt = _matrix(doc, "x_tilde", (d, 1)).col(0)
            out["weak_cocycle"] = WeakCocycle(C, x, xt)
        else:
            out["cocycle"] = C
    return out


def load_structure(source):
    """Load a structure file (path or text) and bind its roles."""
    text = source
    if "\n" not in source:
        with open(source) as fh:
            text = fh.read()
    return bind_structure(parse_structure(text))


# ----------------------------------------------------------- serializing

def _fmt(field, vec):
    return " ".join(field.fmt(x) for x in vec)


def _emit_algebra(lines, field, name, A):
    lines.append("algebra %s %d" % (name, A.dim))
    for i, lab in enumerate(A.labels):
        lines.append("label %s %d %s" % (name, i, "".join(lab.split()) or "e%d" % i))
    lines.append("unit %s %s" % (name, _fmt(field, A.unit)))
    for i in range(A.dim):
        for j in range(A.dim):
            lines.append("product %s %d %d %s" % (name, i, j, _fmt(field, A.table[i][j])))
    lines.append("bind %s %s" % (name, name))


def _emit_matrix(lines, field, name, M):
    lines.append("matrix %s %d %d" % (name, M.nrows, M.ncols))
    for i, r in enumerate(M.rows):
        lines.append(("row %s %d %s" % (name, i, _fmt(field, r))).rstrip())
    lines.append("bind %s %s" % (name, name))


def serialize_structure(instance):
    """Canonical text for a dict as returned by build_gallery / load_structure."""
    Hd = instance["hopf"]
    field = Hd.field
    lines = ["%s %d" % (MAGIC, VERSION), "field %s" % field.name]
    for name, A in (("H", Hd.H), ("L", Hd.L), ("R", Hd.R)):
        _emit_algebra(lines, field, name, A)
    for name, M in (("s_L", Hd.left.s), ("t_L", Hd.left.t), ("delta_L", Hd.left.coproduct),
                    ("eps_L", Hd.left.counit), ("s_R", Hd.right.s), ("t_R", Hd.right.t),
                    ("delta_R", Hd.right.coproduct), ("eps_R", Hd.right.counit), ("S", Hd.S)):
        _emit_matrix(lines, field, name, M)
    CA = instance.get("comodule_algebra")
    if CA is not None:
        _emit_algebra(lines, field, "A", CA.A)
        for name, M in (("eta_R", CA.eta_R), ("rho_R", CA.comodule.rho_R),
                        ("rho_L", CA.comodule.rho_L), ("eta_L", instance["eta_L"]),
                        ("j", instance["j"])):
            _emit_matrix(lines, field, name, M)
        if instance.get("j_inv") is not None:
            _emit_matrix(lines, field, "j_inv", instance["j_inv"])
    W = instance.get("weak_cocycle")
    C = W.cocycle if W is not None else instance.get("cocycle")
    if C is not None:
        M = C.measuring
        d = C.B.dim
        _emit_algebra(lines, field, "B", C.B)
        _emit_matrix(lines, field, "iota", M.iota)
        stacked = Matrix(field, d * len(M.action), d, [r for m in M.action for r in m.rows])
        _emit_matrix(lines, field, "action", stacked)
        _emit_matrix(lines, field, "sigma", C.sigma)
        if C.sigma_inv is not None:
            _emit_matrix(lines, field, "sigma_inv", C.sigma_inv)
        if W is not None:
            _emit_matrix(lines, field, "x", Matrix.from_columns(field, d, [W.x]))
            _emit_matrix(lines, field, "x_tilde", Matrix.from_columns(field, d, [W.x_tilde]))
    return "\n".join(lines) + "\n"
