import itertools

from cleftlab.algebra import (Algebra, validate_algebra, opposite, tensor_algebra, check_algebra_map,
                              TensorSpace, algebra_from_function)
from cleftlab.gallery import dual_numbers, product_of_fields, group_algebra
from cleftlab.linalg import Field, Matrix
import oracle

QQ, F5 = Field(), Field(5)


def test_dual_numbers_valid_and_commutative():
    D = dual_numbers(QQ)
    assert validate_algebra(D).ok
    assert D.is_commutative()
    x = D.basis(1)
    assert D.mul(x, x) == D.zero()


def test_nonassociative_table_rejected_with_witness():
    D = dual_numbers(QQ)
    table = [[list(v) for v in row] for row in D.table]
    table[1][1] = [QQ(1), QQ(0)]  # x^2 = 1 keeps associativity; break it instead at (1, 0)
    table[1][0] = [QQ(0), QQ(0)]
    bad = Algebra(QQ, 2, table, D.unit)
    rep = validate_algebra(bad)
    assert not rep.ok
    assert rep.failures[0].witness is not None


def test_center_of_matrix_algebra_matches_oracle():
    # 2x2 matrices via matrix units e_ij
    units = [(i, j) for i in range(2) for j in range(2)]

    def prod(a, b):
        (i, j), (k, l) = units[a], units[b]
        v = [0] * 4
        if j == k:
            v[units.index((i, l))] = 1
        return v
    M2 = algebra_from_function(QQ, 4, prod, [1, 0, 0, 1])
    assert validate_algebra(M2).ok
    Z = M2.center()
    rows = []
    for i in range(4):
        rows.extend((M2.left_mul(M2.basis(i)) - M2.right_mul(M2.basis(i))).rows)
    assert Z.dim == oracle.nullity(oracle.to_plain(QQ, rows), 4) == 1


def test_opposite_and_tensor():
    G = group_algebra(QQ, [0, 1, 2], lambda a, b: (a + b) % 3, 0)
    T = tensor_algebra(G, opposite(dual_numbers(QQ)))
    assert T.dim == 6 and validate_algebra(T).ok
    P = product_of_fields(F5, 2)
    assert validate_algebra(P).ok and P.center().dim == 2


def test_algebra_map_check():
    D = dual_numbers(QQ)
    ident = Matrix.identity(QQ, 2)
    assert check_algebra_map(D, D, ident).ok
    assert not check_algebra_map(D, D, Matrix(QQ, 2, 2, [[1, 0], [0, 0]]).scale(QQ(2))).ok


def test_balanced_tensor_dimension_matches_oracle():
    # k[C2] (x)_{k[C2]} k[C2] is one copy of k[C2]
    G = group_algebra(QQ, [0, 1], lambda a, b: (a + b) % 2, 0)
    right = [G.right_mul(G.basis(i)) for i in range(2)]
    left = [G.left_mul(G.basis(i)) for i in range(2)]
    T = TensorSpace(QQ, [2, 2], [(right, left)])
    rels = []
    for p in range(2):
        for i, j in itertools.product(range(2), repeat=2):
            v = [0] * 4
            for a, c in enumerate(right[p].col(i)):
                v[a * 2 + j] += c
            for b, c in enumerate(left[p].col(j)):
                v[i * 2 + b] -= c
            rels.append(v)
    expected = 4 - oracle.rank(oracle.to_plain(QQ, rels), 4)
    assert T.dim == expected == 2
