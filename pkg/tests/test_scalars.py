from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cdglab.errors import UsageError
from cdglab.scalars import (QQ, FieldSpec, Matrix, Mod, column_space_basis, inconsistency_certificate,
                            inverse, is_invertible, kernel_basis, rank, rref, solve)

from strategies import fields, matrices


def test_mod_arithmetic_by_hand():
    a, b = Mod(3, 5), Mod(4, 5)
    assert a + b == Mod(2, 5)
    assert a * b == Mod(2, 5)
    assert a / b == Mod(2, 5)  # 4^-1 = 4, 3*4 = 12 = 2
    assert -a == Mod(2, 5)
    assert a ** 4 == Mod(1, 5)


def test_mod_rejects_composite_modulus():
    with pytest.raises(UsageError):
        FieldSpec(6)


def test_field_strings_round_trip():
    assert QQ.format(Fraction(-3, 4)) == "-3/4"
    assert QQ.format(Fraction(2)) == "2"
    F = FieldSpec(7)
    assert F.format(F(-1)) == "6"
    for spec in ("q", "fp:5", "fp:2"):
        assert FieldSpec.from_string(spec).to_string() == spec
    with pytest.raises(UsageError):
        FieldSpec.from_string("reals")


@given(fields, st.integers(-50, 50), st.integers(1, 50))
def test_parse_format_inverse(F, a, b):
    x = F(a) / F(b) if F(b) else F(a)
    assert F.parse(F.format(x)) == x


def test_rank_and_kernel_by_hand():
    A = Matrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]], QQ)
    assert rank(A) == 2
    (k,) = kernel_basis(A)
    assert A.apply(k) == [0, 0, 0]
    R, piv = rref(A)
    assert piv == [0, 1]


def test_rank_depends_on_characteristic():
    A = Matrix.from_rows([[1, 1], [1, -1]], QQ)
    assert rank(A) == 2
    assert rank(Matrix.from_rows([[1, 1], [1, -1]], FieldSpec(2))) == 1


def test_solve_and_certificate_by_hand():
    A = Matrix.from_rows([[1, 1], [2, 2]], QQ)
    assert solve(A, [1, 3]) is None
    y = inconsistency_certificate(A, [1, 3])
    assert y is not None
    assert [sum(y[i] * A[i, j] for i in range(2)) for j in range(2)] == [0, 0]
    assert y[0] * 1 + y[1] * 3 == 1
    x = solve(A, [1, 2])
    assert A.apply(x) == [1, 2]


@given(fields, st.data())
def test_rank_nullity(F, data):
    A = data.draw(matrices(F))
    assert rank(A) + len(kernel_basis(A)) == A.cols
    for v in kernel_basis(A):
        assert not any(A.apply(v))


@given(fields, st.data())
def test_solve_matches_certificate(F, data):
    A = data.draw(matrices(F, max_rows=5, max_cols=4))
    b = data.draw(st.lists(st.integers(-3, 3), min_size=A.rows, max_size=A.rows))
    b = [F(v) for v in b]
    x = solve(A, b)
    y = inconsistency_certificate(A, b)
    assert (x is None) != (y is None)
    if x is not None:
        assert A.apply(x) == b
    else:
        assert not any(sum((y[i] * A[i, j] for i in range(A.rows)), F.zero) for j in range(A.cols))
        assert sum((y[i] * b[i] for i in range(A.rows)), F.zero) == F.one


@given(fields, st.data())
def test_inverse_is_two_sided(F, data):
    n = data.draw(st.integers(0, 4))
    A = data.draw(matrices(F, rows=n, cols=n))
    inv = inverse(A)
    assert (inv is not None) == is_invertible(A) == (rank(A) == n)
    if inv is not None:
        assert A @ inv == Matrix.identity(n, F)
        assert inv @ A == Matrix.identity(n, F)


@given(fields, st.data())
def test_product_is_associative_and_transposes(F, data):
    A = data.draw(matrices(F, rows=3, cols=2))
    B = data.draw(matrices(F, rows=2, cols=4))
    C = data.draw(matrices(F, rows=4, cols=2))
    assert (A @ B) @ C == A @ (B @ C)
    assert (A @ B).T == B.T @ A.T


@given(st.data())
def test_sparse_and_dense_paths_agree(data):
    # matrices wider than the dense cutoff use the sparse elimination
    A = data.draw(matrices(QQ, rows=3, cols=3))
    big = Matrix.block([[A, None], [None, Matrix.identity(70, QQ)]], [3, 70], [3, 70], QQ)
    assert rank(big) == rank(A) + 70
    assert column_space_basis(A) == column_space_basis(big)[:rank(A)]


def test_matrix_shape_errors():
    A = Matrix.zeros(2, 3, QQ)
    with pytest.raises(UsageError):
        A @ A
    with pytest.raises(UsageError):
        A + Matrix.zeros(3, 2, QQ)
