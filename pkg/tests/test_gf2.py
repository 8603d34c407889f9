import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_rank
from ldpcbench.errors import DomainError
from ldpcbench.gf2 import (BitMatrix, in_row_space, null_space_basis, pack, rank, rank_and_rref,
                           row_basis, same_row_space, support, unpack)

small_matrices = st.integers(1, 8).flatmap(
    lambda r: st.integers(1, 10).flatmap(
        lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def test_identity_rref():
    r, R, piv = rank_and_rref(BitMatrix.identity(3))
    assert r == 3
    assert R == BitMatrix.identity(3)
    assert piv == [0, 1, 2]


def test_duplicate_rows_rank_one():
    m = BitMatrix.from_array([[1, 0, 1, 1], [1, 0, 1, 1]])
    assert rank(m) == 1
    assert rank_and_rref(m)[0] == 1


def test_xqr_rank(xqr):
    assert rank(xqr.H) == 24
    assert naive_rank(xqr.H.to_array()) == 24


def test_identity_kernel_is_empty():
    ns = null_space_basis(BitMatrix.identity(5))
    assert ns.shape == (0, 5)


def test_parity_check_kernel():
    ns = null_space_basis(BitMatrix.from_array([[1, 1]]))
    assert ns.to_array().tolist() == [[1, 1]]


def test_hamming_kernel_orthogonal(hamming):
    ns = null_space_basis(hamming.H)
    assert ns.nrows == 4
    for v in ns.row_ints:
        assert hamming.H.mul_vec(v) == 0
    # exhaustive: the span of the basis is exactly the set of codewords
    H = hamming.H.to_array().astype(int)
    words = {x for x in range(256) if not (H @ unpack(x, 8) % 2).any()}
    span = {0}
    for v in ns.row_ints:
        span |= {s ^ v for s in span}
    assert span == words


@settings(max_examples=200, deadline=None)
@given(small_matrices)
def test_rank_matches_oracle_and_transpose(rows):
    m = BitMatrix.from_array(rows)
    r = rank(m)
    assert r == naive_rank(rows)
    assert r == rank(m.transpose())
    assert r == rank_and_rref(m)[0]


@settings(max_examples=200, deadline=None)
@given(small_matrices)
def test_null_space_properties(rows):
    m = BitMatrix.from_array(rows)
    ns = null_space_basis(m)
    assert ns.nrows == m.ncols - rank(m)
    if ns.nrows:
        assert rank(ns) == ns.nrows
    for v in ns.row_ints:
        assert m.mul_vec(v) == 0


@settings(max_examples=100, deadline=None)
@given(small_matrices)
def test_rref_shape_and_row_space(rows):
    m = BitMatrix.from_array(rows)
    r, R, piv = rank_and_rref(m)
    assert R.shape == m.shape
    assert same_row_space(m, R)
    assert all(v == 0 for v in R.row_ints[r:])
    for i, p in enumerate(piv):
        col = [(R.row_ints[t] >> p) & 1 for t in range(R.nrows)]
        assert col == [int(t == i) for t in range(R.nrows)]
    assert same_row_space(row_basis(m), m) if r else True


def test_rref_pivot_rule_is_first_row():
    # column 0 has ones in rows 1 and 2; the first one (row 1) is moved up
    m = BitMatrix.from_array([[0, 1, 0], [1, 0, 0], [1, 1, 1]])
    _, R, piv = rank_and_rref(m)
    assert piv == [0, 1, 2]
    assert R == BitMatrix.identity(3)


def test_pack_unpack_support():
    bits = [1, 0, 1, 1, 0]
    x = pack(bits)
    assert x == 0b01101
    assert unpack(x, 5).tolist() == bits
    assert support(x) == [0, 2, 3]


def test_matmul_matches_numpy():
    rng = np.random.default_rng(3)
    a = rng.integers(0, 2, (5, 7))
    b = rng.integers(0, 2, (7, 4))
    got = BitMatrix.from_array(a).matmul(BitMatrix.from_array(b)).to_array()
    assert (got == (a @ b) % 2).all()


def test_in_row_space():
    m = BitMatrix.from_array([[1, 1, 0], [0, 1, 1]])
    assert in_row_space(m, 0b101)
    assert not in_row_space(m, 0b001)


def test_bad_shapes_rejected():
    with pytest.raises(DomainError):
        BitMatrix([0b100], 2)
    with pytest.raises(DomainError):
        BitMatrix([], 0)


def test_indexing_and_weights():
    m = BitMatrix.from_array([[1, 0, 1], [0, 0, 1]])
    assert m[0, 2] == 1 and m[1, 0] == 0
    assert m.row_weights() == [2, 1]
    assert m.column_weights() == [1, 0, 2]
    assert m.count_ones() == 3
    assert m.select_columns([2, 0]).to_array().tolist() == [[1, 1], [1, 0]]
