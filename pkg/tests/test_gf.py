import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdpconv import gf
from mdpconv.gf import DEFAULT_MODULI, Field, FieldError

from oracles import clmul_mod, cofactor_det, matvec, rank_by_minors


@pytest.mark.parametrize("m", range(1, 17))
def test_default_moduli_irreducible(m):
    assert gf.is_irreducible(DEFAULT_MODULI[m])
    assert DEFAULT_MODULI[m].bit_length() == m + 1


def test_irreducible_by_brute_force():
    for poly in range(2, 1 << 8):
        deg = poly.bit_length() - 1
        brute = all(gf.poly_mod_gf2(poly, d) for d in range(2, poly)
                    if 0 < d.bit_length() - 1 < deg)
        assert gf.is_irreducible(poly) == brute, poly


def test_rejects_bad_modulus():
    with pytest.raises(FieldError):
        Field(4, 0b10101)          # (x^2+x+1)^2
    with pytest.raises(FieldError):
        Field(4, 0b1011)           # wrong degree
    with pytest.raises(FieldError):
        Field(17)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_field_axioms_exhaustive(m):
    f = Field(m)
    q = f.q
    for a in range(q):
        assert f.add(a, 0) == a and f.mul(a, 1) == a and f.mul(a, 0) == 0
        for b in range(q):
            assert f.mul(a, b) == clmul_mod(a, b, m, f.modulus)
            assert f.mul(a, b) == f.mul(b, a)
    rng = np.random.default_rng(m)
    for a, b, c in rng.integers(0, q, size=(200, 3)):
        assert f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c)
        assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)


def test_gf256_known_product():
    # AES field: {57} * {83} = {c1}
    assert Field(8).mul(0x57, 0x83) == 0xC1


@pytest.mark.parametrize("m", [13, 16])
def test_shift_multiply_large_fields(m):
    f = Field(m)
    rng = np.random.default_rng(1)
    a = f.random(rng, 300)
    b = f.random(rng, 300)
    ref = np.array([clmul_mod(int(x), int(y), m, f.modulus) for x, y in zip(a, b)])
    assert np.array_equal(f.vmul(a, b), ref)
    for x in a[:50]:
        if x:
            assert f.mul(x, f.inv(x)) == 1


def test_pow_and_div(gf256):
    f = gf256
    assert f.pow(3, 255) == 1
    assert f.pow(7, -1) == f.inv(7)
    assert f.div(f.mul(9, 11), 11) == 9
    with pytest.raises(ZeroDivisionError):
        f.inv(0)
    with pytest.raises(FieldError):
        f.mul(256, 1)


def test_vmul_matches_scalar(gf256, rng):
    a = gf256.random(rng, (7, 9))
    b = gf256.random(rng, (7, 9))
    v = gf256.vmul(a, b)
    assert all(v[i, j] == gf256.mul(a[i, j], b[i, j]) for i in range(7) for j in range(9))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_rank_matches_minor_oracle(r, c, seed):
    f = Field(2)
    rng = np.random.default_rng(seed)
    A = f.random(rng, (r, c))
    if rng.random() < 0.3 and r > 1:
        A[-1] = A[0]               # force dependence
    assert gf.rank(f, A) == rank_by_minors(f, A)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), st.integers(1, 7), st.integers(0, 2**32 - 1))
def test_solve_consistent_system(r, c, seed):
    f = Field(8)
    rng = np.random.default_rng(seed)
    A = f.random(rng, (r, c))
    x0 = f.random(rng, c)
    b = matvec(f, A, x0)
    sol = gf.rank_and_solve(f, A, b)
    assert sol.x is not None
    assert np.array_equal(matvec(f, A, sol.x), b)
    # determined unknowns take the same value in every solution
    N = gf.nullspace(f, A)
    assert np.array_equal(sol.x[sol.determined], x0[sol.determined])
    assert not N[sol.determined].any()
    assert (~sol.determined == N.any(axis=1)).all()


def test_inconsistent_system(gf256):
    A = np.array([[1, 2], [1, 2]])
    sol = gf.rank_and_solve(gf256, A, [3, 4])
    assert sol.x is None and sol.rank == 1


def test_rref_shape(gf256, rng):
    A = gf256.random(rng, (4, 6))
    A[2] = A[0] ^ A[1]
    M, r, piv = gf.rref(gf256, A)
    assert r == 3 and len(piv) == 3
    for i, c in enumerate(piv):
        assert M[i, c] == 1 and np.count_nonzero(M[:, c]) == 1
    assert not M[r:].any()


def test_det_inverse_nullspace(gf256, rng):
    f = gf256
    for size in range(1, 6):
        A = f.random(rng, (size, size))
        assert gf.det(f, A) == cofactor_det(f, A)
        if gf.det(f, A):
            Ai = gf.inverse(f, A)
            assert np.array_equal(f.matmul(A, Ai), np.eye(size, dtype=np.int64))
    S = np.array([[1, 2, 3], [2, 4, 6]])
    S[1] = f.vmul(S[0], 5)
    with pytest.raises(ZeroDivisionError):
        gf.inverse(f, S[:, :2])
    N = gf.nullspace(f, S)
    assert N.shape == (3, 2)
    assert not f.matmul(S, N).any()


def test_minor_nonzero_validation(gf256):
    A = np.arange(9).reshape(3, 3)
    with pytest.raises(ValueError):
        gf.minor_nonzero(gf256, A, [0, 1], [0])
    with pytest.raises(ValueError):
        gf.minor_nonzero(gf256, A, [1, 0], [0, 1])
    with pytest.raises(ValueError):
        gf.minor_nonzero(gf256, A, [0, 3], [0, 1])
    assert gf.minor_nonzero(gf256, A, [], [])
