"""[N, K] MDS block code by polynomial evaluation (Reed-Solomon style)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gf
from .errors import IntegrityError
from .gf import Field


@dataclass(frozen=True, eq=False)
class MdsBlockCode:
    field: Field
    N: int
    K: int
    points: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 < self.K <= self.N:
            raise ValueError(f"need 0 < K <= N, got [{self.N},{self.K}]")
        if self.N > self.field.q:
            raise ValueError(f"N={self.N} exceeds the field size {self.field.q}")
        pts = self.points or tuple(range(self.N))
        if len(pts) != self.N or len(set(pts)) != self.N:
            raise ValueError("evaluation points must be N distinct field elements")
        if min(pts) < 0 or max(pts) >= self.field.q:
            raise ValueError("evaluation point outside the field")
        object.__setattr__(self, "points", tuple(int(x) for x in pts))

    def vandermonde(self) -> np.ndarray:
        """N x K matrix with row i = (1, x_i, x_i^2, ...)."""
        f = self.field
        V = np.zeros((self.N, self.K), dtype=np.int64)
        x = np.array(self.points, dtype=np.int64)
        col = np.ones(self.N, dtype=np.int64)
        for j in range(self.K):
            V[:, j] = col
            col = f.vmul(col, x)
        return V


def mds_encode(code: MdsBlockCode, message: Sequence[int]) -> np.ndarray:
    """Evaluations of the message polynomial (coefficients low degree first)."""
    u = np.asarray(message, dtype=np.int64).reshape(-1)
    if u.size != code.K:
        raise ValueError(f"message must have {code.K} symbols")
    f = code.field
    x = np.array(code.points, dtype=np.int64)
    acc = np.zeros(code.N, dtype=np.int64)
    for c in u[::-1]:
        acc = f.vmul(acc, x) ^ c
    return acc


def mds_decode_erasures(code: MdsBlockCode, received: Sequence[int | None]) -> np.ndarray | None:
    """Message from any K surviving symbols, or None when more than N-K are erased.

    ``received`` holds a value per position, None for an erasure.
    """
    if len(received) != code.N:
        raise ValueError(f"expected {code.N} received symbols")
    known = [i for i, s in enumerate(received) if s is not None]
    if len(known) < code.K:
        return None
    V = code.vandermonde()
    use = known[: code.K]
    y = np.array([received[i] for i in known], dtype=np.int64)
    sol = gf.rank_and_solve(code.field, V[use], y[: code.K])
    if sol.x is None or sol.rank < code.K:
        raise IntegrityError("Vandermonde subsystem is singular")
    check = code.field.matmul(V[known], sol.x[:, None]).reshape(-1)
    if not np.array_equal(check, y):
        raise IntegrityError("received symbols are not a codeword")
    return sol.x


def mds_stream_recovery(code: MdsBlockCode, erased: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Run the block code over consecutive N-symbol blocks of an erasure mask.

    Random messages are encoded, erased and decoded; returns a per-symbol
    mask of erased symbols that were recovered.  A trailing partial block is
    padded with clean symbols.
    """
    erased = np.asarray(erased, dtype=bool)
    L = erased.size
    blocks = -(-L // code.N)
    mask = np.zeros(blocks * code.N, dtype=bool)
    mask[:L] = erased
    rec = np.zeros_like(mask)
    for b in range(blocks):
        sl = slice(b * code.N, (b + 1) * code.N)
        e = mask[sl]
        if not e.any():
            continue
        msg = code.field.random(rng, code.K)
        cw = mds_encode(code, msg)
        got = mds_decode_erasures(code, [None if x else int(v) for v, x in zip(cw, e)])
        if got is not None:
            if not np.array_equal(got, msg):
                raise IntegrityError("MDS decoder returned a wrong message")
            rec[sl] = e
    return rec[:L]
