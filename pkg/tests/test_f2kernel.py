import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polarlist.errors import EmptyConstraintsError, InvalidArgument
from polarlist.f2kernel import (
    kron_power,
    mat_mul_f2,
    polar_transform,
    rank_f2,
    row_weight,
    row_weights,
    trailing_one_reduce,
)

# 4x6 constraint matrix of the six-bit eBCH toy example (0-based columns here)
V6 = np.array(
    [
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 0],
        [0, 1, 0, 0, 1, 0],
    ],
    dtype=np.uint8,
)


def bits(n):
    return st.lists(st.integers(0, 1), min_size=n, max_size=n).map(lambda x: np.array(x, np.uint8))


def vectors():
    return st.integers(1, 10).flatmap(lambda m: bits(1 << m))


def row_space(mat):
    mat = np.atleast_2d(mat)
    out = set()
    for coeffs in itertools.product((0, 1), repeat=mat.shape[0]):
        out.add(tuple(mat_mul_f2(np.array([coeffs], np.uint8), mat)[0]))
    return out


def test_transform_small_cases():
    assert not polar_transform(np.zeros(8, np.uint8)).any()
    assert polar_transform([1, 1]).tolist() == [0, 1]
    assert polar_transform([0, 0, 0, 1]).tolist() == [1, 1, 1, 1]


@pytest.mark.parametrize("m", range(1, 8))
def test_transform_matches_kronecker_matrix(m):
    rng = np.random.default_rng(m)
    u = rng.integers(0, 2, (20, 1 << m), dtype=np.uint8)
    assert np.array_equal(polar_transform(u), mat_mul_f2(u, kron_power(m)))


def test_transform_rejects_bad_length():
    with pytest.raises(InvalidArgument):
        polar_transform(np.zeros(6, np.uint8))


def test_involution_on_many_vectors():
    rng = np.random.default_rng(1)
    for m in range(1, 11):
        u = rng.integers(0, 2, (1000, 1 << m), dtype=np.uint8)
        assert np.array_equal(polar_transform(polar_transform(u)), u)


@given(vectors())
def test_involution(u):
    assert np.array_equal(polar_transform(polar_transform(u)), u)


@given(st.integers(1, 9).flatmap(lambda m: st.tuples(bits(1 << m), bits(1 << m))))
def test_linearity(pair):
    a, b = pair
    assert np.array_equal(polar_transform(a ^ b), polar_transform(a) ^ polar_transform(b))


def test_row_weight_examples():
    assert row_weight(1, 5) == 1
    assert row_weight(32, 5) == 32
    assert row_weight(6, 3) == 4 == int(kron_power(3)[5].sum())
    with pytest.raises(InvalidArgument):
        row_weight(9, 3)
    with pytest.raises(InvalidArgument):
        row_weight(0, 3)


@pytest.mark.parametrize("m", range(0, 7))
def test_row_weight_exhaustive(m):
    g = kron_power(m)
    for i in range(1, (1 << m) + 1):
        assert row_weight(i, m) == int(g[i - 1].sum())
    assert np.array_equal(row_weights(1 << m), g.sum(axis=1))


def test_reduce_toy_example():
    cm = trailing_one_reduce(V6)
    assert set(p + 1 for p in cm.pivots) == {1, 2, 4, 5}
    by_pivot = {p + 1: {s + 1 for s in support} for support, p in cm.rows}
    assert by_pivot[4] == {3, 4}
    assert by_pivot[5] == {2, 5}
    assert rank_f2(V6) == 4


def test_reduce_identity_is_fixed():
    eye = np.eye(5, dtype=np.uint8)
    cm = trailing_one_reduce(eye)
    assert np.array_equal(cm.to_matrix(), eye)


def test_reduce_rejects_zero_matrix():
    with pytest.raises(EmptyConstraintsError):
        trailing_one_reduce(np.zeros((3, 4), np.uint8))


@pytest.mark.parametrize("seed", range(10))
def test_reduce_random_preserves_row_space(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, (8, 12), dtype=np.uint8)
    a[rng.integers(0, 8)] = 0
    if not a.any():
        return
    cm = trailing_one_reduce(a)
    out = cm.to_matrix()
    assert len(cm) == rank_f2(a) == rank_f2(out)
    assert len(set(cm.pivots)) == len(cm)
    assert row_space(out) == row_space(a)


@given(st.integers(1, 6), st.integers(1, 10), st.data())
def test_reduce_properties(rows, cols, data):
    a = np.array(
        data.draw(st.lists(st.lists(st.integers(0, 1), min_size=cols, max_size=cols), min_size=rows, max_size=rows)),
        np.uint8,
    )
    if not a.any():
        with pytest.raises(EmptyConstraintsError):
            trailing_one_reduce(a)
        return
    cm = trailing_one_reduce(a)
    for support, p in cm.rows:
        assert p == max(support)
    assert len(set(cm.pivots)) == len(cm) == rank_f2(a)
    space = row_space(a)
    assert all(tuple(r) in space for r in cm.to_matrix())
    out_space = row_space(cm.to_matrix())
    assert all(tuple(r) in out_space for r in a)


def test_matmul_and_rank_basics():
    rng = np.random.default_rng(3)
    a = rng.integers(0, 2, (5, 7), dtype=np.uint8)
    assert np.array_equal(mat_mul_f2(a, np.eye(7, dtype=np.uint8)), a)
    assert rank_f2(np.eye(9, dtype=np.uint8)) == 9
    with pytest.raises(InvalidArgument):
        mat_mul_f2(a, a)
