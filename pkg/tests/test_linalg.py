from __future__ import annotations

from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from toric_cap.linalg import dense_to_sparse, matmul, nullspace, rank, rref, sparse_rank

from oracles import sympy_rank

entries = st.integers(-4, 4)


def matrices(max_rows=7, max_cols=7):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(entries, min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_ranks_agree_with_sympy(mat):
    expected = sympy_rank(mat)
    assert rank(mat) == expected
    assert sparse_rank(dense_to_sparse(mat)) == expected


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_nullspace_is_a_kernel_basis(mat):
    basis = nullspace(mat)
    assert len(basis) == len(mat[0]) - rank(mat)
    for v in basis:
        assert all(x == 0 for row in matmul(mat, [[x] for x in v]) for x in row)
    if basis:
        assert rank(basis) == len(basis)


def test_rref_small_example():
    red, pivots = rref([[2, 4], [1, 3]])
    assert pivots == [0, 1]
    assert red == [[1, 0], [0, 1]]


def test_empty_shapes():
    assert rank([]) == 0
    assert sparse_rank([]) == 0
    assert sparse_rank([{}, {}]) == 0
    assert nullspace([], ncols=2) == [[F(1), F(0)], [F(0), F(1)]]


def test_bidiagonal_rank():
    # the shape produced by mixed-sign families on one line
    n = 60
    rows = [{i: F(i + 1), i + 1: F(-(i + 2))} for i in range(n)]
    assert sparse_rank(rows) == n
