import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdpconv.gf import Field
from mdpconv.polymat import (PolyMatrix, poly_det, poly_degree, poly_mul, sliding_window_matrix,
                             truncate)

F = Field(4)


def rand_pm(rng, deg, r, c):
    return PolyMatrix(F, F.random(rng, (deg + 1, r, c)))


def test_trailing_zero_coefficients_stripped():
    c = np.zeros((4, 2, 2), dtype=np.int64)
    c[1, 0, 0] = 3
    A = PolyMatrix(F, c)
    assert A.deg == 1 and A.coeffs.shape == (2, 2, 2)
    Z = PolyMatrix.zeros(F, 2, 3)
    assert Z.is_zero and Z.deg == 0
    with pytest.raises(ValueError):
        A.coeffs[0, 0, 0] = 1


def test_from_entries_and_entry():
    A = PolyMatrix.from_entries(F, [[[1, 2], [0]], [[3], [0, 0, 5]]])
    assert A.shape == (2, 2) and A.deg == 2
    assert A.entry(1, 1) == [0, 0, 5]
    assert A.entry(0, 0) == [1, 2]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_product_evaluates_pointwise(seed):
    rng = np.random.default_rng(seed)
    A = rand_pm(rng, int(rng.integers(0, 3)), 2, 3)
    B = rand_pm(rng, int(rng.integers(0, 3)), 3, 2)
    C = A @ B
    for x in range(F.q):
        assert np.array_equal(C.evaluate(x), F.matmul(A.evaluate(x), B.evaluate(x)))


def test_algebra_identities(rng):
    A = rand_pm(rng, 2, 2, 2)
    B = rand_pm(rng, 1, 2, 2)
    I = PolyMatrix.identity(F, 2)
    assert A @ I == A
    assert (A + A).is_zero
    assert (A - B) == (A + B)
    assert (A @ B).T == B.T @ A.T
    assert A.shift(2).coeff(2).tolist() == A.coeff(0).tolist()
    assert poly_mul(A, B) == A @ B
    with pytest.raises(ValueError):
        A @ rand_pm(rng, 0, 3, 1)


def test_truncate_is_block_toeplitz(rng):
    A = rand_pm(rng, 2, 1, 2)
    T = truncate(A, 3)
    assert T.shape == (4, 8)
    for br in range(4):
        for bc in range(4):
            blk = T[br:br + 1, 2 * bc:2 * bc + 2]
            want = A.coeff(br - bc) if 0 <= br - bc <= A.deg else 0 * blk
            assert np.array_equal(blk, want)
    assert np.array_equal(A.truncate(1), truncate(A, 1))
    with pytest.raises(ValueError):
        truncate(A, -1)


def test_truncate_encodes_product(rng):
    """truncate(A) applied to stacked coefficients gives the coefficients of A u."""
    A = rand_pm(rng, 2, 2, 1)
    u = rand_pm(rng, 3, 1, 1)
    v = A @ u
    T = truncate(A, 3)
    got = F.matmul(T, u.coeffs.reshape(-1, 1)).reshape(-1)
    assert np.array_equal(got, v.coeffs[:4].reshape(-1))


def test_sliding_window_matrix_matches_truncation(rng):
    H = rand_pm(rng, 2, 1, 2)
    W = sliding_window_matrix(H, 3, 2)
    T = truncate(H, 4)
    assert np.array_equal(W, T[2:, :])
    with pytest.raises(ValueError):
        sliding_window_matrix(H, 3, 1)
    with pytest.raises(ValueError):
        sliding_window_matrix(H, 0, 2)


def test_poly_det_matches_evaluation(rng):
    for _ in range(10):
        A = rand_pm(rng, 2, 3, 3)
        d = poly_det(A)
        for x in range(0, F.q, 3):
            from mdpconv import gf
            val = 0
            for c in reversed(d):
                val = F.mul(val, x) ^ c
            assert val == gf.det(F, A.evaluate(x))
    assert poly_degree([0, 0]) == -1
    assert poly_degree([1, 2, 0]) == 1
