from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cleftlab.linalg import (Field, FieldError, DimensionError, Matrix, Subspace, kernel, solve_linear,
                             QuotientSpace, solve_unknown_map, solve_matrix_equations, equation_residual,
                             obstruction_certificate)
import oracle

QQ, F5, F7 = Field(), Field(5), Field(7)


def small_matrices(max_dim=5, lo=-3, hi=3):
    return st.integers(1, max_dim).flatmap(lambda r: st.integers(1, max_dim).flatmap(
        lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


class TestField:
    def test_parse_rationals(self):
        assert QQ.parse("-3/4") == QQ((-3, 4))
        assert QQ.fmt(QQ.parse("6/8")) == "3/4"

    @pytest.mark.parametrize("text", ["1/0", "abc", "1.5", "", "2/-3"])
    def test_parse_rejects(self, text):
        with pytest.raises(FieldError):
            QQ.parse(text)

    @pytest.mark.parametrize("text", ["5", "-1", "1/2"])
    def test_prime_field_wants_canonical_residues(self, text):
        with pytest.raises(FieldError):
            F5.parse(text)

    def test_from_name(self):
        assert Field.from_name("q") == QQ
        assert Field.from_name("fp:5") == F5
        for bad in ("fp:4", "fp:x", "r"):
            with pytest.raises(FieldError):
                Field.from_name(bad)

    def test_prime_field_arithmetic(self):
        assert F5(3) * F5(2) == F5(1)
        assert F5((1, 2)) == F5(3)
        assert len(F5.elements()) == 5
        with pytest.raises(FieldError):
            QQ.elements()

    @given(st.integers(-50, 50), st.integers(1, 50))
    def test_fmt_parse_round_trip(self, a, b):
        x = QQ((a, b))
        assert QQ.parse(QQ.fmt(x)) == x


class TestMatrix:
    def test_shape_errors(self):
        with pytest.raises(DimensionError):
            Matrix(QQ, 2, 2, [[1, 2]])
        with pytest.raises(DimensionError):
            Matrix(QQ, 2, 2) @ Matrix(QQ, 3, 1)

    def test_inverse(self):
        M = Matrix(QQ, 2, 2, [[1, 2], [3, 4]])
        assert M @ M.inverse() == Matrix.identity(QQ, 2)
        assert Matrix(QQ, 2, 2, [[1, 2], [2, 4]]).inverse() is None

    @settings(max_examples=60, deadline=None)
    @given(small_matrices())
    def test_rank_matches_oracle(self, rows):
        for F in (QQ, F5):
            M = Matrix(F, len(rows), len(rows[0]), rows)
            assert M.rank() == oracle.matrix_rank(F, M)

    @settings(max_examples=60, deadline=None)
    @given(small_matrices())
    def test_kernel_matches_oracle(self, rows):
        for F in (QQ, F7):
            M = Matrix(F, len(rows), len(rows[0]), rows)
            K = kernel(M)
            assert K.dim == oracle.nullity(oracle.to_plain(F, M.rows), M.ncols, F.p)
            for v in K.basis:
                assert all(x == 0 for x in M.apply(v))

    @settings(max_examples=60, deadline=None)
    @given(small_matrices(), st.data())
    def test_solve_matches_oracle(self, rows, data):
        M = Matrix(QQ, len(rows), len(rows[0]), rows)
        b = data.draw(st.lists(st.integers(-3, 3), min_size=M.nrows, max_size=M.nrows))
        x = solve_linear(M, [QQ(v) for v in b])
        plain = oracle.to_plain(QQ, M.rows)
        assert (x is not None) == oracle.solvable(plain, [Fraction(v) for v in b], M.ncols)
        if x is not None:
            assert M.apply(x) == [QQ(v) for v in b]


class TestSubspaces:
    def test_subspace_membership(self):
        S = Subspace(QQ, 3, [[1, 1, 0], [0, 1, 1]])
        assert S.dim == 2
        assert S.contains([1, 2, 1])
        assert not S.contains([1, 0, 0])
        assert S.coordinates([1, 0, 0]) is None
        assert S == Subspace(QQ, 3, [[1, 2, 1], [1, 1, 0]])

    def test_quotient(self):
        rel = Subspace(QQ, 3, [[1, -1, 0]])
        Q = QuotientSpace(rel)
        assert Q.dim == 2
        assert Q.project([1, 0, 0]) == Q.project([0, 1, 0])
        v = [QQ(2), QQ(5), QQ(7)]
        assert Q.project(Q.lift(Q.project(v))) == Q.project(v)

    def test_solve_unknown_map(self):
        # X with X A = B for A invertible 2x2
        A = Matrix(QQ, 2, 2, [[1, 1], [0, 1]])
        B = Matrix(QQ, 1, 2, [[2, 5]])
        part, ker = solve_unknown_map(QQ, 1, 2, lambda X: (X @ A - B).entries)
        assert ker == [] and part @ A == B
        assert solve_unknown_map(QQ, 1, 1, lambda X: [X.rows[0][0], X.rows[0][0] - 1]) is None

    def test_obstruction_certificate(self):
        # x = 0 and x = 1 together: both equations are needed for 0 = 1
        assert obstruction_certificate(QQ, 1, 1, lambda X: [X.rows[0][0], X.rows[0][0] - 1]) == (0, 1)
        A = Matrix(QQ, 2, 2, [[1, 1], [0, 1]])
        assert obstruction_certificate(QQ, 1, 2, lambda X: (X @ A).entries) is None

    @settings(max_examples=40, deadline=None)
    @given(small_matrices(max_dim=4, lo=0, hi=4), st.lists(st.integers(0, 4), min_size=4, max_size=4))
    def test_certificate_iff_unsolvable(self, rows, rhs):
        A = Matrix(F5, len(rows), len(rows[0]), rows)
        b = [F5(x) for x in rhs[:A.nrows]] + [F5(0)] * (A.nrows - len(rhs))
        cert = obstruction_certificate(F5, A.ncols, 1, lambda X: [x - y for x, y in zip(A.apply(X.col(0)), b)])
        solvable = oracle.solvable(rows, [int(x) for x in b], A.ncols, 5)
        assert (cert is None) == solvable

    def test_matrix_equations_agree_with_residual(self):
        P = Matrix(F5, 2, 2, [[1, 2], [0, 1]])
        Q = Matrix(F5, 2, 2, [[0, 1], [1, 0]])
        X0 = Matrix(F5, 2, 2, [[1, 0], [3, 4]])
        R = P @ X0 @ Q + X0
        eqs = [([(P, Q), (None, None)], R)]
        part, ker = solve_matrix_equations(F5, 2, 2, eqs)
        assert all(x == 0 for x in equation_residual(eqs, part))
        if not ker:
            assert part == X0
        for K in ker:
            assert all(x == 0 for x in equation_residual(eqs, part + K))
