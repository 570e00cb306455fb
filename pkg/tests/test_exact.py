from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from srscheme import exact
from srscheme.exact import ScaledMatrix

R = np.array([[0, 1], [1, 0]])


def small_ints(shape):
    return hnp.arrays(np.int64, shape, elements=st.integers(-50, 50))


def test_mat_mul_examples():
    X = np.arange(9).reshape(3, 3)
    assert np.array_equal(exact.mat_mul(exact.identity(3), X), X)
    assert np.array_equal(exact.mat_mul(exact.ones(2), exact.ones(2)), 2 * exact.ones(2))
    assert np.array_equal(exact.mat_mul(R, R), exact.identity(2))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 64), st.integers(1, 64), st.integers(1, 64), st.integers(0, 2**32))
def test_mat_mul_matches_naive_oracle(n, k, p, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-1000, 1000, size=(n, k))
    b = rng.integers(-1000, 1000, size=(k, p))
    assert np.array_equal(exact.mat_mul(a, b, tile=7), exact.naive_matmul(a, b))


def test_mat_mul_int64_path_is_exact():
    # bound above 2**53 forces the integer kernel; float64 would round these
    a = np.array([[2**40 + 1, 3]], dtype=np.int64)
    b = np.array([[2**12 + 1], [5]], dtype=np.int64)
    assert exact.product_bound(a, b) > exact.FLOAT_EXACT
    assert exact.mat_mul(a, b)[0, 0] == (2**40 + 1) * (2**12 + 1) + 15


def test_mat_mul_overflow_raises():
    big = np.array([[2**40]], dtype=np.int64)
    with pytest.raises(OverflowError):
        exact.mat_mul(big, big)
    with pytest.raises(OverflowError):
        exact.naive_matmul(big, big)
    with pytest.raises(ValueError):
        exact.mat_mul(np.ones((2, 3)), np.ones((2, 3)))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 200), st.sampled_from([1, 2, 4]), st.sampled_from([16, 64, 512]), st.integers(0, 2**32))
def test_mat_mul_thread_and_tile_independent(n, threads, tile, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(-3, 4, size=(n, n))
    b = rng.integers(-3, 4, size=(n, n))
    ref = exact.mat_mul(a, b)
    assert np.array_equal(exact.mat_mul(a, b, tile=tile, threads=threads), ref)


def test_kron_examples():
    assert np.array_equal(exact.kron(exact.identity(2), exact.identity(2)), exact.identity(4))
    rr = exact.kron(R, R)
    assert sorted(map(tuple, np.argwhere(rr))) == [(0, 3), (1, 2), (2, 1), (3, 0)]
    with pytest.raises(OverflowError):
        exact.kron(np.array([[2**40]]), np.array([[2**40]]))


@settings(max_examples=100, deadline=None)
@given(small_ints((2, 2)), small_ints((2, 2)), small_ints((2, 2)), small_ints((2, 2)))
def test_kron_mixed_product(A, B, C, D):
    left = exact.mat_mul(exact.kron(A, B), exact.kron(C, D))
    right = exact.kron(exact.mat_mul(A, C), exact.mat_mul(B, D))
    assert np.array_equal(left, right)


def test_kron_add_accumulates():
    out = exact.zeros(4)
    exact.kron_add(out, exact.identity(2), R)
    exact.kron_add(out, R, exact.identity(2))
    assert np.array_equal(out, exact.kron(exact.identity(2), R) + exact.kron(R, exact.identity(2)))


def test_hadamard_examples():
    X = np.arange(4).reshape(2, 2)
    assert np.array_equal(exact.hadamard(X, exact.ones(2)), X)
    assert not exact.hadamard(exact.identity(2), R).any()
    assert np.array_equal(exact.hadamard(exact.identity(3) + exact.ones(3), exact.identity(3)), 2 * exact.identity(3))
    with pytest.raises(ValueError):
        exact.hadamard(exact.ones(2), exact.ones(3))


def test_checked_arithmetic_overflow():
    top = np.array([[exact.INT64_MAX]])
    with pytest.raises(OverflowError):
        exact.checked_add(top, np.array([[1]]))
    with pytest.raises(OverflowError):
        exact.checked_scale(top, 2)


@pytest.mark.parametrize("v", [1, 4, 16])
def test_rank_one_projector(v):
    E = ScaledMatrix(exact.ones(v), v)
    assert E.is_idempotent()
    assert E.trace() == 1


def test_scaled_matrix_canonical_and_ops():
    a = ScaledMatrix(np.array([[2, 4], [6, 8]]), 4)
    assert a.den == 2 and a.num.tolist() == [[1, 2], [3, 4]]
    b = ScaledMatrix(np.array([[1, 0], [0, 1]]), -3)
    assert b.den == 3 and b.num.tolist() == [[-1, 0], [0, -1]]
    s = a + b
    assert s.entry(0, 0) == Fraction(1, 2) - Fraction(1, 3)
    assert (a - a).is_zero()
    assert (-a).entry(1, 1) == -2
    assert a.scale(Fraction(2, 3)).entry(0, 1) == Fraction(2, 3)
    assert (a @ b).equals(a.scale(Fraction(-1, 3)))
    assert a.hadamard(a).entry(1, 0) == Fraction(9, 4)
    assert a.to_fraction_array()[1, 0] == Fraction(3, 2)
    with pytest.raises(ZeroDivisionError):
        ScaledMatrix(exact.ones(2), 0)


def test_scaled_sum():
    total = exact.scaled_sum([(Fraction(1, 2), exact.identity(2)), (Fraction(1, 3), exact.ones(2))], (2, 2))
    assert total.entry(0, 0) == Fraction(5, 6)
    assert total.entry(0, 1) == Fraction(1, 3)


def test_dense_round_trip(tmp_path):
    m = ScaledMatrix(np.array([[1, -2, 3], [0, 5, 7]]), 6)
    exact.write_dense(tmp_path / "m.txt", m)
    assert exact.read_dense(tmp_path / "m.txt").equals(m)


def test_coo_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    m = rng.integers(0, 2, size=(7, 5))
    exact.write_coo(tmp_path / "m.coo", m)
    assert np.array_equal(exact.read_coo(tmp_path / "m.coo"), m)
    exact.write_coo(tmp_path / "z.coo", exact.zeros(3))
    assert not exact.read_coo(tmp_path / "z.coo").any()
    with pytest.raises(ValueError):
        exact.write_coo(tmp_path / "bad.coo", 2 * exact.ones(2))
