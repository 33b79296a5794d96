"""Polynomial matrices over GF(2^m) and their block-Toeplitz expansions."""
from __future__ import annotations

import numpy as np

from .gf import Field


class PolyMatrix:
    """Matrix with polynomial entries, stored as coefficient matrices.

    ``coeffs[i]`` is the (rows x cols) coefficient of z^i.  Trailing zero
    coefficients are stripped; the zero matrix keeps a single zero
    coefficient and has degree 0.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        c = np.array(coeffs, dtype=np.int64, copy=True)
        if c.ndim == 2:
            c = c[None]
        if c.ndim != 3 or c.shape[0] == 0:
            raise ValueError("coefficients must have shape (deg+1, rows, cols)")
        if c.size and (c.min() < 0 or c.max() >= field.q):
            raise ValueError("coefficient outside the field")
        nz = np.flatnonzero(c.reshape(c.shape[0], -1).any(axis=1))
        last = int(nz[-1]) if nz.size else 0
        c = c[: last + 1].copy()
        c.flags.writeable = False
        self.field = field
        self.coeffs = c

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "PolyMatrix":
        return cls(field, np.zeros((1, rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: Field, size: int) -> "PolyMatrix":
        return cls(field, np.eye(size, dtype=np.int64)[None])

    @classmethod
    def from_entries(cls, field: Field, entries) -> "PolyMatrix":
        """Build from a nested list of coefficient lists (lowest degree first)."""
        rows = len(entries)
        cols = len(entries[0])
        deg = max(len(p) for row in entries for p in row) - 1
        c = np.zeros((max(deg, 0) + 1, rows, cols), dtype=np.int64)
        for r, row in enumerate(entries):
            if len(row) != cols:
                raise ValueError("ragged entries")
            for s, p in enumerate(row):
                c[: len(p), r, s] = p
        return cls(field, c)

    @property
    def rows(self) -> int:
        return self.coeffs.shape[1]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[2]

    @property
    def shape(self) -> tuple[int, int]:
        return self.coeffs.shape[1:]

    @property
    def deg(self) -> int:
        return self.coeffs.shape[0] - 1

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def coeff(self, i: int) -> np.ndarray:
        if 0 <= i <= self.deg:
            return self.coeffs[i]
        return np.zeros(self.shape, dtype=np.int64)

    def entry(self, r: int, c: int) -> list[int]:
        p = [int(x) for x in self.coeffs[:, r, c]]
        while len(p) > 1 and p[-1] == 0:
            p.pop()
        return p

    def __eq__(self, other):
        return (isinstance(other, PolyMatrix) and self.field == other.field
                and self.coeffs.shape == other.coeffs.shape
                and bool((self.coeffs == other.coeffs).all()))

    def __hash__(self):
        return hash((self.field, self.coeffs.tobytes(), self.coeffs.shape))

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols}, deg={self.deg}, {self.field})"

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        d = max(self.deg, other.deg) + 1
        c = np.zeros((d,) + self.shape, dtype=np.int64)
        c[: self.deg + 1] ^= self.coeffs
        c[: other.deg + 1] ^= other.coeffs
        return PolyMatrix(self.field, c)

    __sub__ = __add__

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        return poly_mul(self, other)

    @property
    def T(self) -> "PolyMatrix":
        return PolyMatrix(self.field, self.coeffs.transpose(0, 2, 1))

    def shift(self, s: int) -> "PolyMatrix":
        """Multiply by z^s."""
        c = np.zeros((self.deg + 1 + s,) + self.shape, dtype=np.int64)
        c[s:] = self.coeffs
        return PolyMatrix(self.field, c)

    def evaluate(self, x: int) -> np.ndarray:
        """Horner evaluation at a field point."""
        acc = np.zeros(self.shape, dtype=np.int64)
        for i in range(self.deg, -1, -1):
            acc = self.field.vmul(acc, x) ^ self.coeffs[i]
        return acc

    def submatrix(self, rows, cols) -> "PolyMatrix":
        return PolyMatrix(self.field, self.coeffs[:, rows][:, :, cols])

    def truncate(self, j: int) -> np.ndarray:
        return truncate(self, j)


def poly_mul(A: PolyMatrix, B: PolyMatrix) -> PolyMatrix:
    if A.cols != B.rows:
        raise ValueError(f"cannot multiply {A.shape} by {B.shape}")
    f = A.field
    c = np.zeros((A.deg + B.deg + 1, A.rows, B.cols), dtype=np.int64)
    for i in range(A.deg + 1):
        for j in range(B.deg + 1):
            c[i + j] ^= f.matmul(A.coeffs[i], B.coeffs[j])
    return PolyMatrix(f, c)


def truncate(A: PolyMatrix, j: int) -> np.ndarray:
    """Lower block-triangular Toeplitz matrix with block (r, c) = A_{r-c}."""
    if j < 0:
        raise ValueError("truncation level must be >= 0")
    r, c = A.shape
    out = np.zeros(((j + 1) * r, (j + 1) * c), dtype=np.int64)
    for br in range(j + 1):
        for bc in range(max(0, br - A.deg), br + 1):
            out[br * r:(br + 1) * r, bc * c:(bc + 1) * c] = A.coeffs[br - bc]
    return out


def sliding_window_matrix(H: PolyMatrix, window_len: int, known_prefix: int) -> np.ndarray:
    """Staircase relating ``known_prefix`` decoded blocks and the next window.

    Block-row r is the parity equation at time t + r; block-column c is the
    code block at time t - known_prefix + c.
    """
    if window_len < 1:
        raise ValueError("window must hold at least one block")
    if known_prefix < H.deg:
        raise ValueError(f"known prefix {known_prefix} shorter than the memory {H.deg}")
    p, n = H.shape
    width = known_prefix + window_len
    out = np.zeros((window_len * p, width * n), dtype=np.int64)
    for r in range(window_len):
        for c in range(width):
            lag = r + known_prefix - c
            if 0 <= lag <= H.deg:
                out[r * p:(r + 1) * p, c * n:(c + 1) * n] = H.coeffs[lag]
    return out


# scalar polynomials (coefficient lists, lowest degree first) ----------------

def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_scalar_mul(f: Field, a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] ^= f.mul(x, y)
    return _trim(out)


def poly_scalar_add(a: list[int], b: list[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] ^= x
    for i, x in enumerate(b):
        out[i] ^= x
    return _trim(out)


def poly_degree(p: list[int]) -> int:
    """Degree with deg(0) = -1."""
    p = _trim(list(p))
    return -1 if p == [0] else len(p) - 1


def poly_det(M: PolyMatrix) -> list[int]:
    """Determinant polynomial by cofactor expansion (small sizes only)."""
    if M.rows != M.cols:
        raise ValueError("determinant of a non-square matrix")
    f = M.field
    entries = [[M.entry(r, c) for c in range(M.cols)] for r in range(M.rows)]

    def rec(rows: list[int], cols: list[int]) -> list[int]:
        if len(rows) == 1:
            return entries[rows[0]][cols[0]]
        acc = [0]
        r0 = rows[0]
        for i, c in enumerate(cols):
            e = entries[r0][c]
            if e == [0]:
                continue
            acc = poly_scalar_add(acc, poly_scalar_mul(f, e, rec(rows[1:], cols[:i] + cols[i + 1:])))
        return acc

    if M.rows == 0:
        return [1]
    return rec(list(range(M.rows)), list(range(M.cols)))
