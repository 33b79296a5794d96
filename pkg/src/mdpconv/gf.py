"""Arithmetic in GF(2^m) and dense linear algebra over it.

Field elements are plain integers in ``[0, 2^m)`` whose bits are the
coefficients of a polynomial over GF(2).  Matrices are 2-D ``int64`` numpy
arrays; the field they live in is passed alongside.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels

# Fixed modulus per degree.  m = 8 uses x^8+x^4+x^3+x+1 (the AES polynomial,
# not primitive: log tables are built on a primitive element found at
# construction time).  The others are standard primitive trinomials and
# pentanomials.
DEFAULT_MODULI = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}

TABLE_MAX_M = 12


class FieldError(ValueError):
    pass


def _clmul_mod(a: int, b: int, m: int, poly: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> m & 1:
            a ^= poly
    return r


def poly_mod_gf2(a: int, b: int) -> int:
    """Remainder of a divided by b, both GF(2)-polynomials as bit patterns."""
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for d in range(2, 1 << (deg // 2 + 1)):
        if poly_mod_gf2(poly, d) == 0:
            return False
    return True


def _prime_factors(x: int) -> list[int]:
    out = []
    p = 2
    while p * p <= x:
        if x % p == 0:
            out.append(p)
            while x % p == 0:
                x //= p
        p += 1
    if x > 1:
        out.append(x)
    return out


@lru_cache(maxsize=None)
def _tables(m: int, poly: int):
    q1 = (1 << m) - 1
    factors = _prime_factors(q1)

    def power(a, e):
        r = 1
        while e:
            if e & 1:
                r = _clmul_mod(r, a, m, poly)
            a = _clmul_mod(a, a, m, poly)
            e >>= 1
        return r

    gen = 1
    for g in range(2, q1 + 1):
        if all(power(g, q1 // f) != 1 for f in factors):
            gen = g
            break
    exp = np.zeros(2 * q1, dtype=np.int64)
    log = np.zeros(q1 + 1, dtype=np.int64)
    x = 1
    for i in range(q1):
        exp[i] = x
        exp[i + q1] = x
        log[x] = i
        x = _clmul_mod(x, gen, m, poly)
    exp.flags.writeable = False
    log.flags.writeable = False
    return exp, log


class Field:
    """GF(2^m) with a given irreducible modulus (bit pattern including x^m)."""

    def __init__(self, m: int, modulus: int | str = "default"):
        if not 1 <= m <= 16:
            raise FieldError(f"extension degree must be in 1..16, got {m}")
        if modulus == "default":
            modulus = DEFAULT_MODULI[m]
        modulus = int(modulus)
        if modulus.bit_length() - 1 != m:
            raise FieldError(f"modulus {modulus:#x} does not have degree {m}")
        if not is_irreducible(modulus):
            raise FieldError(f"modulus {modulus:#x} is reducible over GF(2)")
        self.m = m
        self.modulus = modulus
        self.q = 1 << m
        if m <= TABLE_MAX_M:
            self.exp, self.log = _tables(m, modulus)
        else:
            self.exp = np.zeros(0, dtype=np.int64)
            self.log = np.zeros(0, dtype=np.int64)

    @property
    def kargs(self):
        """Field description in the form the kernels take."""
        return self.exp, self.log, self.m, self.modulus

    def __repr__(self):
        return f"Field(m={self.m}, modulus={self.modulus:#x})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.m, self.modulus) == (other.m, other.modulus)

    def __hash__(self):
        return hash((self.m, self.modulus))

    # scalar ops --------------------------------------------------------
    def _check(self, a: int) -> int:
        a = int(a)
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element of GF(2^{self.m})")
        return a

    def add(self, a: int, b: int) -> int:
        return self._check(a) ^ self._check(b)

    sub = add

    def mul(self, a: int, b: int) -> int:
        return int(kernels.gf_mul(self._check(a), self._check(b), *self.kargs))

    def inv(self, a: int) -> int:
        a = self._check(a)
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(kernels.gf_inv(a, *self.kargs))

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        a = self._check(a)
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    # array ops ---------------------------------------------------------
    def vmul(self, a, b) -> np.ndarray:
        return kernels.vmul(a, b, *self.kargs)

    def matmul(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[-1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        prod = self.vmul(A[:, :, None], B[None, :, :])
        return np.bitwise_xor.reduce(prod, axis=1) if A.shape[1] else np.zeros(
            (A.shape[0], B.shape[1]), dtype=np.int64)

    def random(self, rng: np.random.Generator, shape, nonzero: bool = False) -> np.ndarray:
        lo = 1 if nonzero else 0
        return rng.integers(lo, self.q, size=shape, dtype=np.int64)


@lru_cache(maxsize=None)
def default_field(m: int = 8) -> Field:
    return Field(m)


class Solution(NamedTuple):
    rank: int
    x: np.ndarray | None          # None when the system is inconsistent
    pivots: tuple[int, ...]
    determined: np.ndarray        # unknowns with the same value in every solution


def rref(field: Field, A) -> tuple[np.ndarray, int, tuple[int, ...]]:
    """Reduced row echelon form (copy), rank and pivot columns."""
    M = np.array(A, dtype=np.int64, copy=True)
    if M.ndim != 2:
        raise ValueError("expected a matrix")
    rank, piv = kernels.rref(M, M.shape[1], *field.kargs)
    return M, int(rank), tuple(int(c) for c in piv)


def rank(field: Field, A) -> int:
    return rref(field, A)[1]


def rank_and_solve(field: Field, A, b) -> Solution:
    """Gaussian elimination on [A | b], pivoting on the first nonzero entry.

    Free unknowns are set to zero in the returned particular solution.
    """
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    if A.ndim != 2 or A.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: A {A.shape}, b {b.shape}")
    ncols = A.shape[1]
    M = np.empty((A.shape[0], ncols + 1), dtype=np.int64)
    M[:, :ncols] = A
    M[:, ncols] = b
    r, piv = kernels.rref(M, ncols, *field.kargs)
    r = int(r)
    det = np.asarray(kernels.determined_columns(M, r, piv, ncols), dtype=bool)
    if not kernels.consistent(M, r, ncols):
        return Solution(r, None, tuple(int(c) for c in piv), det)
    x = np.zeros(ncols, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = M[i, ncols]
    return Solution(r, x, tuple(int(c) for c in piv), det)


def _check_indices(idx: Sequence[int], bound: int, what: str) -> list[int]:
    idx = [int(i) for i in idx]
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError(f"{what} indices must be strictly increasing")
    if idx and (idx[0] < 0 or idx[-1] >= bound):
        raise ValueError(f"{what} index out of range")
    return idx


def minor_nonzero(field: Field, A, row_idx: Sequence[int], col_idx: Sequence[int]) -> bool:
    """True iff the square submatrix A[row_idx, col_idx] is nonsingular."""
    A = np.asarray(A, dtype=np.int64)
    if len(row_idx) != len(col_idx):
        raise ValueError("row and column index lists differ in length")
    rows = _check_indices(row_idx, A.shape[0], "row")
    cols = _check_indices(col_idx, A.shape[1], "column")
    if not rows:
        return True
    sub = A[np.ix_(rows, cols)].copy()
    r, _ = kernels.rref(sub, sub.shape[1], *field.kargs)
    return int(r) == len(rows)


def det(field: Field, A) -> int:
    """Determinant by elimination (product of pivots, signs vanish in char 2)."""
    M = np.array(A, dtype=np.int64, copy=True)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")
    d = 1
    for c in range(n):
        nz = np.flatnonzero(M[c:, c])
        if nz.size == 0:
            return 0
        p = c + nz[0]
        if p != c:
            M[[c, p]] = M[[p, c]]
        piv = int(M[c, c])
        d = field.mul(d, piv)
        inv = field.inv(piv)
        for i in range(c + 1, n):
            f = int(M[i, c])
            if f:
                M[i, c:] ^= field.vmul(field.mul(f, inv), M[c, c:])
    return d


def inverse(field: Field, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    M = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    r, _ = kernels.rref(M, n, *field.kargs)
    if int(r) < n:
        raise ZeroDivisionError("matrix is singular")
    return M[:, n:].copy()


def nullspace(field: Field, A) -> np.ndarray:
    """Basis of the right kernel as columns of the returned (cols x dim) matrix."""
    M, r, piv = rref(field, A)
    ncols = M.shape[1]
    free = [c for c in range(ncols) if c not in piv]
    N = np.zeros((ncols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        N[f, j] = 1
        for i, c in enumerate(piv):
            N[c, j] = M[i, f]  # -M[i, f] in characteristic 2
    return N
