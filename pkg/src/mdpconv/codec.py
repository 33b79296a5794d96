"""Convolutional codes: validation, derived parameters, encoding, streams."""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import gf, kernels
from .gf import Field
from .polymat import PolyMatrix, poly_degree, poly_det


class CodeError(ValueError):
    """Raised for inconsistent or degenerate code descriptions."""


def poly_kernel_basis(A: PolyMatrix, count: int, max_deg: int) -> PolyMatrix:
    """Minimal polynomial basis of {g : A(z) g(z) = 0}, columns by degree.

    Degree by degree, the kernel of the coefficient map on vectors of degree
    <= D is computed and completed against the shifts of the columns already
    chosen.
    """
    f = A.field
    p, n = A.shape
    chosen: list[np.ndarray] = []      # coefficient arrays (deg+1, n)
    for D in range(max_deg + 1):
        T = np.zeros(((A.deg + D + 1) * p, (D + 1) * n), dtype=np.int64)
        for bc in range(D + 1):
            for i in range(A.deg + 1):
                br = bc + i
                T[br * p:(br + 1) * p, bc * n:(bc + 1) * n] = A.coeffs[i]
        K = gf.nullspace(f, T)
        if K.shape[1] == 0:
            continue
        shifts = []
        for g in chosen:
            dg = g.shape[0] - 1
            for s in range(D - dg + 1):
                v = np.zeros((D + 1, n), dtype=np.int64)
                v[s:s + dg + 1] = g
                shifts.append(v.reshape(-1))
        S = np.array(shifts, dtype=np.int64).reshape(len(shifts), (D + 1) * n)
        r = gf.rank(f, S) if len(shifts) else 0
        for col in K.T:
            trial = np.vstack([S, col[None]])
            r2 = gf.rank(f, trial)
            if r2 > r:
                S, r = trial, r2
                chosen.append(col.reshape(D + 1, n).copy())
                if len(chosen) == count:
                    break
        if len(chosen) == count:
            break
    if len(chosen) < count:
        raise CodeError(f"no kernel basis of size {count} with degree <= {max_deg}")
    deg = max(g.shape[0] for g in chosen) - 1
    c = np.zeros((deg + 1, n, count), dtype=np.int64)
    for j, g in enumerate(chosen):
        c[: g.shape[0], :, j] = g
    return PolyMatrix(f, c)


def full_minor_dets(M: PolyMatrix) -> list[list[int]]:
    """Determinant polynomials of all full-size square submatrices."""
    r, c = M.shape
    if r <= c:
        return [poly_det(M.submatrix(list(range(r)), list(cols)))
                for cols in itertools.combinations(range(c), r)]
    return [poly_det(M.submatrix(list(rows), list(range(c))))
            for rows in itertools.combinations(range(r), c)]


def singleton_bound(n: int, k: int, delta: int) -> int:
    return (n - k) * (delta // k + 1) + delta + 1


def window_parameter(n: int, k: int, delta: int) -> int:
    return delta // k + delta // (n - k)


@dataclass(frozen=True, eq=False)
class ConvCode:
    """A validated (n, k, delta) convolutional code; build with :func:`make_code`."""

    G: PolyMatrix
    H: PolyMatrix
    delta: int

    @property
    def field(self) -> Field:
        return self.G.field

    @property
    def n(self) -> int:
        return self.G.rows

    @property
    def k(self) -> int:
        return self.G.cols

    @property
    def nu(self) -> int:
        return self.H.deg

    @property
    def memory(self) -> int:
        return self.G.deg

    @property
    def L(self) -> int:
        return window_parameter(self.n, self.k, self.delta)

    @property
    def singleton(self) -> int:
        return singleton_bound(self.n, self.k, self.delta)

    @cached_property
    def Hs(self) -> np.ndarray:
        return np.ascontiguousarray(self.H.coeffs)

    @cached_property
    def Gs(self) -> np.ndarray:
        return np.ascontiguousarray(self.G.coeffs)

    def __eq__(self, other):
        return (isinstance(other, ConvCode) and self.G == other.G and self.H == other.H
                and self.delta == other.delta)

    def __hash__(self):
        return hash((self.G, self.H, self.delta))

    def __repr__(self):
        return (f"ConvCode(n={self.n}, k={self.k}, delta={self.delta}, nu={self.nu}, "
                f"L={self.L}, {self.field})")


def make_code(G: PolyMatrix, H: PolyMatrix | None = None, delta: int | None = None) -> ConvCode:
    """Validate G (and H, derived when omitted) and infer the degree."""
    n, k = G.shape
    if not 0 < k < n:
        raise CodeError(f"need 0 < k < n, got n={n}, k={k}")
    degs = [poly_degree(d) for d in full_minor_dets(G)]
    if max(degs) < 0:
        raise CodeError("generator matrix is rank deficient")
    inferred = max(degs)
    if delta is not None and delta != inferred:
        raise CodeError(f"degree mismatch: given {delta}, generator minors give {inferred}")
    if H is None:
        H = poly_kernel_basis(G.T, n - k, inferred).T
    if H.shape != (n - k, n):
        raise CodeError(f"parity-check matrix must be {(n - k, n)}, got {H.shape}")
    if H.field != G.field:
        raise CodeError("G and H over different fields")
    if not (H @ G).is_zero():
        raise CodeError("H(z) G(z) != 0")
    if max(poly_degree(d) for d in full_minor_dets(H)) < 0:
        raise CodeError("parity-check matrix is rank deficient")
    return ConvCode(G, H, inferred)


def code_from_parity(H: PolyMatrix, delta: int | None = None) -> ConvCode:
    """Derive a minimal generator for the kernel of H and validate the pair."""
    p, n = H.shape
    bound = delta if delta is not None else n * H.deg
    G = poly_kernel_basis(H, n - p, bound)
    return make_code(G, H, delta)


# ---------------------------------------------------------------------------
# symbol streams
# ---------------------------------------------------------------------------

ERASED = None


@dataclass(frozen=True, eq=False)
class SymbolStream:
    """Time-major sequence of n-blocks; erased slots carry value 0."""

    n: int
    values: np.ndarray
    erased: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.int64, copy=True).reshape(-1)
        e = np.array(self.erased, dtype=bool, copy=True).reshape(-1)
        if v.shape != e.shape:
            raise ValueError("values and erasure mask differ in length")
        if v.size % self.n:
            raise ValueError(f"stream length {v.size} not a multiple of n={self.n}")
        v[e] = 0
        v.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "erased", e)

    @classmethod
    def clean(cls, n: int, values) -> "SymbolStream":
        v = np.asarray(values, dtype=np.int64).reshape(-1)
        return cls(n, v, np.zeros(v.shape, dtype=bool))

    @classmethod
    def from_list(cls, n: int, slots: Sequence[int | None]) -> "SymbolStream":
        e = np.array([s is ERASED for s in slots], dtype=bool)
        v = np.array([0 if s is ERASED else s for s in slots], dtype=np.int64)
        return cls(n, v, e)

    def to_list(self) -> list[int | None]:
        return [ERASED if e else int(v) for v, e in zip(self.values, self.erased)]

    def __len__(self):
        return self.values.size

    @property
    def num_blocks(self) -> int:
        return self.values.size // self.n

    def blocks(self) -> np.ndarray:
        return self.values.reshape(-1, self.n)

    @property
    def num_erased(self) -> int:
        return int(self.erased.sum())

    def __eq__(self, other):
        return (isinstance(other, SymbolStream) and self.n == other.n
                and np.array_equal(self.values, other.values)
                and np.array_equal(self.erased, other.erased))

    __hash__ = None


def encode(code: ConvCode, u, terminated: bool = False) -> SymbolStream:
    """v(z) = G(z) u(z), one n-block per message block.

    Without ``terminated`` the output has as many blocks as the message (a
    prefix of the infinite codeword).  With it, deg G zero message blocks are
    appended so the full polynomial codeword is emitted.
    """
    u = np.asarray(u, dtype=np.int64).reshape(-1, code.k)
    if u.shape[0] < 1:
        raise ValueError("message must hold at least one block")
    if u.min(initial=0) < 0 or u.max(initial=0) >= code.field.q:
        raise ValueError("message symbol outside the field")
    n_out = u.shape[0] + (code.memory if terminated else 0)
    v = kernels.conv_encode(code.Gs, np.ascontiguousarray(u), n_out, *code.field.kargs)
    return SymbolStream.clean(code.n, v)


def erase(stream: SymbolStream, pattern: Iterable[int]) -> SymbolStream:
    idx = np.fromiter((int(i) for i in pattern), dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= len(stream)):
        raise IndexError("erasure index outside the stream")
    e = stream.erased.copy()
    e[idx] = True
    return SymbolStream(stream.n, stream.values, e)


# ---------------------------------------------------------------------------
# code files
# ---------------------------------------------------------------------------

def _format_poly_matrix(tag: str, M: PolyMatrix) -> list[str]:
    lines = [f"{tag} {M.deg}"]
    for i in range(M.deg + 1):
        for row in M.coeffs[i]:
            lines.append(" ".join(str(int(x)) for x in row))
        lines.append("")
    return lines


def format_code(code: ConvCode) -> str:
    f = code.field
    lines = [f"{code.n} {code.k} {code.delta} {f.m} {f.modulus}"]
    lines += _format_poly_matrix("G", code.G)
    lines += _format_poly_matrix("H", code.H)
    return "\n".join(lines).rstrip("\n") + "\n"


def parse_code(text: str) -> ConvCode:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    try:
        n, k, delta, m, modulus = (int(x) for x in rows[0])
        field = Field(m, modulus)
        pos = 1

        def read_matrix(tag: str, r: int, c: int) -> PolyMatrix:
            nonlocal pos
            head = rows[pos]
            if len(head) != 2 or head[0] != tag:
                raise CodeError(f"expected '{tag} <deg>' header, got {' '.join(head)!r}")
            deg = int(head[1])
            pos += 1
            coeffs = np.zeros((deg + 1, r, c), dtype=np.int64)
            for i in range(deg + 1):
                for a in range(r):
                    row = [int(x) for x in rows[pos]]
                    if len(row) != c:
                        raise CodeError(f"{tag}_{i} row {a} has {len(row)} entries, expected {c}")
                    coeffs[i, a] = row
                    pos += 1
            return PolyMatrix(field, coeffs)

        G = read_matrix("G", n, k)
        H = read_matrix("H", n - k, n)
    except (IndexError, ValueError) as exc:
        if isinstance(exc, CodeError):
            raise
        raise CodeError(f"malformed code file: {exc}") from exc
    return make_code(G, H, delta)


def write_code(code: ConvCode, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(format_code(code))


def read_code(path: str | os.PathLike) -> ConvCode:
    with open(path) as fh:
        return parse_code(fh.read())
