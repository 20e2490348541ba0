from fractions import Fraction

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form
from hypothesis import given, settings
from hypothesis import strategies as st

from eqcalc.errors import ValidationError
from eqcalc.linalg import Matrix, dense_rank, inverse, rank, rref, smith_invariants, solve_columns

small_ints = st.integers(min_value=-3, max_value=3)


@st.composite
def int_matrices(draw, max_rows=7, max_cols=7):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    sparse = draw(st.booleans())
    entries = st.sampled_from([0, 0, 0, 1, -1, 2]) if sparse else small_ints
    return [[draw(entries) for _ in range(c)] for _ in range(r)], c


def _sympy_rank(rows, ncols):
    if not rows or ncols == 0:
        return 0
    return sympy.Matrix(rows).rank()


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_rank_matches_sympy(data):
    rows, ncols = data
    m = Matrix.from_dense(rows, ncols=ncols)
    expected = _sympy_rank(rows, ncols)
    assert rank(m) == expected
    assert rank(m.transpose()) == expected
    assert dense_rank(rows) == expected if rows else True


@settings(max_examples=80, deadline=None)
@given(int_matrices(5, 5), int_matrices(5, 5))
def test_product_and_transpose(a, b):
    rows_a, ca = a
    rows_b, cb = b
    ma = Matrix.from_dense(rows_a, ncols=ca)
    if len(rows_b) != ca:
        return
    mb = Matrix.from_dense(rows_b, ncols=cb)
    got = (ma @ mb).to_dense()
    want = sympy.Matrix(rows_a) * sympy.Matrix(rows_b) if rows_a and rows_b else None
    if want is not None:
        assert got == [[int(x) for x in want.row(i)] for i in range(want.rows)]
    assert (ma @ mb).transpose() == mb.transpose() @ ma.transpose()


def test_rref_and_solve():
    red, piv = rref([[1, 2, 3], [2, 4, 7]])
    assert piv == [0, 2]
    assert red == [[1, 2, 0], [0, 0, 1]]
    coords = solve_columns([[1, 0, 1], [0, 1, 1]], [2, 3, 5])
    assert coords == [2, 3]
    with pytest.raises(ValidationError):
        solve_columns([[1, 0, 0]], [0, 1, 0])


def test_inverse():
    a = [[2, 1], [1, 1]]
    inv = inverse(a)
    assert inv == [[1, -1], [-1, 2]]
    with pytest.raises(ValidationError):
        inverse([[1, 2], [2, 4]])
    assert inverse([[Fraction(1, 2)]]) == [[2]]


@settings(max_examples=60, deadline=None)
@given(int_matrices(4, 4))
def test_smith_matches_sympy(data):
    rows, ncols = data
    if not rows or ncols == 0:
        return
    m = Matrix.from_dense(rows, ncols=ncols)
    ours = smith_invariants(m)
    snf = smith_normal_form(sympy.Matrix(rows), domain=sympy.ZZ)
    theirs = [abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0]
    assert ours == theirs


def test_smith_rejects_fractions():
    with pytest.raises(ValidationError):
        smith_invariants(Matrix.from_dense([[Fraction(1, 2)]]))


def test_identity_and_zero():
    assert rank(Matrix.identity(5)) == 5
    assert rank(Matrix.zeros(3, 4)) == 0
    assert Matrix.zeros(2, 2).is_zero()
