"""Erasure decoders: whole-stream, sliding-window, and via the generator matrix.

All three are exact or abstain: a symbol is filled in only when every
codeword consistent with the received symbols agrees on it.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np

from . import gf, kernels
from .codec import ConvCode, SymbolStream
from .errors import IntegrityError
from .polymat import truncate


class Outcome(enum.IntEnum):
    CLEAN = 0
    RECOVERED = 1
    LOST = 2


class Window(NamedTuple):
    start: int        # first block of the window
    length: int       # blocks in the window
    unknowns: int
    rank: int
    committed: int    # unknowns fixed by this solve


@dataclass(frozen=True)
class WindowPolicy:
    """Window levels to try; a level-j window spans j+1 blocks.

    ``max_level=None`` means the code's L.  ``search="bisect"`` locates the
    smallest sufficient level by bisection, which pays off for large L.
    """

    min_level: int = 0
    max_level: int | None = None
    search: Literal["linear", "bisect"] = "linear"

    def __post_init__(self):
        if self.min_level < 0 or (self.max_level is not None and self.max_level < self.min_level):
            raise ValueError("invalid window levels")
        if self.search not in ("linear", "bisect"):
            raise ValueError(f"unknown window search {self.search!r}")


@dataclass(frozen=True)
class DecodeReport:
    stream: SymbolStream              # decoded stream; unresolved slots stay erased
    outcomes: np.ndarray              # Outcome per block
    window_level: np.ndarray          # level that resolved the block, -1 if none / not needed
    windows: list[Window] = field(default_factory=list)
    resync_points: list[int] = field(default_factory=list)
    injected: int = 0                 # erased symbols in the input

    @property
    def recovered_symbols(self) -> int:
        return self.injected - self.stream.num_erased

    @property
    def lost_symbols(self) -> int:
        return self.stream.num_erased

    @property
    def lost_blocks(self) -> int:
        return int((self.outcomes == Outcome.LOST).sum())

    @property
    def complete(self) -> bool:
        return self.stream.num_erased == 0


def _levels(code: ConvCode, policy: WindowPolicy | None) -> tuple[int, int, bool]:
    policy = policy or WindowPolicy()
    jmax = code.L if policy.max_level is None else policy.max_level
    return policy.min_level, jmax, policy.search == "bisect"


def _block_outcomes(erased_in: np.ndarray, erased_out: np.ndarray, n: int) -> np.ndarray:
    had = erased_in.reshape(-1, n).any(axis=1)
    left = erased_out.reshape(-1, n).any(axis=1)
    out = np.full(had.shape, Outcome.CLEAN, dtype=np.int8)
    out[had] = Outcome.RECOVERED
    out[left] = Outcome.LOST
    return out


def decode_global(code: ConvCode, stream: SymbolStream, terminated: bool = True) -> DecodeReport:
    """Solve the whole-stream parity system for all erased symbols at once.

    ``terminated`` adds the trailing parity rows that hold when the stream is
    a complete codeword followed by zeros.
    """
    if stream.n != code.n:
        raise ValueError("stream block size does not match the code")
    N = stream.num_blocks
    extra = code.nu if terminated else 0
    big = truncate(code.H, N - 1 + extra)[:, : N * code.n]
    unk = np.flatnonzero(stream.erased)
    kn = np.flatnonzero(~stream.erased)
    f = code.field
    rhs = np.bitwise_xor.reduce(f.vmul(big[:, kn], stream.values[kn][None, :]), axis=1) \
        if kn.size else np.zeros(big.shape[0], dtype=np.int64)
    sol = gf.rank_and_solve(f, big[:, unk], rhs)
    if sol.x is None:
        raise IntegrityError("received symbols violate the parity checks")
    values = stream.values.copy()
    erased = stream.erased.copy()
    good = unk[sol.determined]
    values[good] = sol.x[sol.determined]
    erased[good] = False
    out = SymbolStream(code.n, values, erased)
    outcomes = _block_outcomes(stream.erased, erased, code.n)
    win = [Window(0, N, int(unk.size), sol.rank, int(good.size))]
    return DecodeReport(out, outcomes, np.full(N, -1, dtype=np.int64), win, [], stream.num_erased)


def _padded(code: ConvCode, stream: SymbolStream, terminated: bool, pad_blocks: int):
    vals = stream.values.copy()
    known = ~stream.erased
    if terminated and pad_blocks:
        vals = np.concatenate([vals, np.zeros(pad_blocks * code.n, dtype=np.int64)])
        known = np.concatenate([known, np.ones(pad_blocks * code.n, dtype=bool)])
    return np.ascontiguousarray(vals), np.ascontiguousarray(known)


def decode_sliding(code: ConvCode, stream: SymbolStream, policy: WindowPolicy | None = None,
                   terminated: bool = False) -> DecodeReport:
    """Block-by-block decoding with windows of at most L+1 blocks.

    At the first block holding erasures, windows of growing level are solved
    against the known history until that block is pinned down; every unknown
    the solve determines is committed.  A block that no admissible window
    resolves is reported lost and decoding restarts after nu consecutive
    fully known blocks.  ``terminated`` treats the stream as a complete
    codeword followed by known zero blocks.
    """
    if stream.n != code.n:
        raise ValueError("stream block size does not match the code")
    jmin, jmax, bisect = _levels(code, policy)
    N = stream.num_blocks
    pad = max(jmax, code.nu) if terminated else 0
    vals, known = _padded(code, stream, terminated, pad)
    total = N + pad
    block_win = np.full(total, -1, dtype=np.int64)
    block_lost = np.zeros(total, dtype=np.int8)
    cap = total * (jmax - jmin + 3) + 1
    wlog = np.zeros((cap, 5), dtype=np.int64)
    rlog = np.zeros(total + 1, dtype=np.int64)
    err, nwin, nres = kernels.sliding_decode(
        code.Hs, vals, known, total, code.n, jmin, jmax, bisect,
        *code.field.kargs, block_win, block_lost, wlog, rlog)
    if err >= 0:
        raise IntegrityError(f"inconsistent parity system at block {err}")
    out = SymbolStream(code.n, vals[: N * code.n], ~known[: N * code.n])
    outcomes = _block_outcomes(stream.erased, out.erased, code.n)
    windows = [Window(*map(int, row)) for row in wlog[: min(nwin, cap)]]
    resync = [int(x) for x in rlog[: min(nres, rlog.size)] if x < N]
    return DecodeReport(out, outcomes, block_win[:N].copy(), windows, resync, stream.num_erased)


class GeneratorDecode(NamedTuple):
    message: SymbolStream    # k symbols per block; unresolved symbols erased
    report: DecodeReport     # outcomes per message block, codeword rebuilt where possible


def decode_via_generator(code: ConvCode, stream: SymbolStream, policy: WindowPolicy | None = None,
                         terminated: bool = False) -> GeneratorDecode:
    """Recover the information sequence directly from the unerased symbols.

    For message block t, the received coordinates of blocks t..t+j are
    expressed through the generator staircase in the message blocks
    t-deg G..t+j, of which the unresolved ones are unknowns.  Message blocks
    left unresolved stay as unknowns in later windows, so decoding continues
    past a loss without a resynchronisation step.
    """
    if stream.n != code.n:
        raise ValueError("stream block size does not match the code")
    jmin, jmax, _ = _levels(code, policy)
    n, k, mem = code.n, code.k, code.memory
    N = stream.num_blocks
    pad = max(jmax, mem) if terminated else 0
    vals, known = _padded(code, stream, terminated, pad)
    total = N + pad
    n_msg = N - mem if terminated else N
    if n_msg < 1:
        raise ValueError("stream shorter than the generator memory")
    u = np.zeros(total * k, dtype=np.int64)
    uknown = np.zeros(total * k, dtype=bool)
    uknown[n_msg * k:] = True
    block_win = np.full(total, -1, dtype=np.int64)
    block_lost = np.zeros(total, dtype=np.int8)
    cap = total * (jmax - jmin + 2) + 1
    wlog = np.zeros((cap, 5), dtype=np.int64)
    err, nwin = kernels.generator_decode(
        code.Gs, vals, known, u, uknown, total, n, k, jmin, jmax,
        *code.field.kargs, block_win, block_lost, wlog)
    if err >= 0:
        raise IntegrityError(f"inconsistent generator system at block {err}")
    msg = SymbolStream(k, u[: n_msg * k], ~uknown[: n_msg * k])

    # rebuild codeword symbols whose message blocks are all known
    ublocks = u[: n_msg * k].reshape(n_msg, k)
    vre = kernels.conv_encode(code.Gs, np.ascontiguousarray(ublocks), N, *code.field.kargs)
    ubk = uknown[: n_msg * k].reshape(n_msg, k).all(axis=1)
    ubk = np.concatenate([ubk, np.ones(max(0, N - n_msg), dtype=bool)])
    vok = np.array([ubk[max(0, t - mem): t + 1].all() for t in range(N)], dtype=bool)
    values = stream.values.copy()
    erased = stream.erased.copy()
    fill = erased & np.repeat(vok, n)
    values[fill] = vre.reshape(-1)[fill]
    erased[fill] = False
    rebuilt = SymbolStream(n, values, erased)

    mk = uknown[: n_msg * k].reshape(n_msg, k).all(axis=1)
    outcomes = np.where(mk, Outcome.RECOVERED, Outcome.LOST).astype(np.int8)
    windows = [Window(*map(int, row)) for row in wlog[: min(nwin, cap)]]
    report = DecodeReport(rebuilt, outcomes, block_win[:n_msg].copy(), windows, [], stream.num_erased)
    return GeneratorDecode(msg, report)
