"""Independent reference linear algebra on Fractions (or ints mod p).

Used to cross-check ranks, kernels and solvability computed by the
library's flint-backed routines.
"""
from fractions import Fraction


def to_plain(field, rows):
    """Matrix rows as Fractions (rationals) or ints in [0, p)."""
    if field.p is None:
        return [[x if isinstance(x, (int, Fraction)) else Fraction(int(x.p), int(x.q)) for x in r]
                for r in rows]
    return [[int(x) % field.p for x in r] for r in rows]


def _inv(x, p):
    return 1 / x if p is None else pow(x, p - 2, p)


def _norm(x, p):
    return x if p is None else x % p


def rref(rows, ncols, p=None):
    """Reduced row echelon form; returns (rows, pivots)."""
    M = [[_norm(x, p) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = _inv(M[r][c], p)
        M[r] = [_norm(x * inv, p) for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [_norm(a - f * b, p) for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(rows, ncols, p=None):
    return len(rref(rows, ncols, p)[1])


def nullity(rows, ncols, p=None):
    return ncols - rank(rows, ncols, p)


def solvable(rows, rhs, ncols, p=None):
    """Whether rows x = rhs has a solution."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    _, piv = rref(aug, ncols + 1, p)
    return ncols not in piv


def matrix_rank(field, M):
    return rank(to_plain(field, M.rows), M.ncols, field.p)
