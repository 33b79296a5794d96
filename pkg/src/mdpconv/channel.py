"""Erasure patterns: i.i.d., Gilbert-Elliott bursts, sliding-window constrained,
packet-loss presets, explicit lists, and an adversarial search."""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gf, kernels
from .codec import ConvCode
from .polymat import truncate


class ChannelError(ValueError):
    pass


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _prob(name: str, p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ChannelError(f"{name} must lie in [0, 1], got {p}")
    return float(p)


@dataclass(frozen=True)
class IID:
    p: float

    def __post_init__(self):
        _prob("p", self.p)

    def mask(self, length: int, rng: np.random.Generator) -> np.ndarray:
        return rng.random(length) < self.p

    def describe(self) -> str:
        return f"iid(p={self.p:g})"


@dataclass(frozen=True)
class GilbertElliott:
    p_gb: float
    p_bg: float
    p_loss_good: float = 0.0
    p_loss_bad: float = 1.0

    def __post_init__(self):
        for name in ("p_gb", "p_bg", "p_loss_good", "p_loss_bad"):
            _prob(name, getattr(self, name))

    def mask(self, length: int, rng: np.random.Generator) -> np.ndarray:
        ds = rng.random(length)
        dl = rng.random(length)
        return kernels.gilbert_elliott_sample(ds, dl, self.p_gb, self.p_bg,
                                              self.p_loss_good, self.p_loss_bad)

    def describe(self) -> str:
        return (f"ge(p_gb={self.p_gb:g},p_bg={self.p_bg:g},"
                f"p_good={self.p_loss_good:g},p_bad={self.p_loss_bad:g})")


@dataclass(frozen=True)
class Windowed:
    """At most ``e`` erasures in every run of ``w`` consecutive symbols.

    Sampled sequentially: each symbol is erased with probability ``p`` unless
    the trailing window is already full.  This is not uniform over feasible
    patterns; only the constraint matters for the decoding guarantee.
    """

    e: int
    w: int
    p: float = 0.5

    def __post_init__(self):
        if self.w < 1 or self.e < 0:
            raise ChannelError("window length must be positive and e non-negative")
        if self.e > self.w:
            raise ChannelError(f"infeasible window constraint: e={self.e} > w={self.w}")
        _prob("p", self.p)

    def mask(self, length: int, rng: np.random.Generator) -> np.ndarray:
        return kernels.windowed_sample(rng.random(length), self.p, self.e, self.w)

    def describe(self) -> str:
        return f"windowed(e={self.e},w={self.w},p={self.p:g})"


# Packet-size mixes, in bits: (share of minimum-size, share of maximum-size,
# share uniform in between).
PACKET_PRESETS = {
    "tcp": (0.35, 0.35, 0.30),
    "realtime": (0.30, 0.50, 0.20),
}
ACK_BITS = 320
MAX_BITS = 12_000


@dataclass(frozen=True)
class PacketLoss:
    """Packets of random size, each lost with probability ``p``.

    A packet occupies ceil(bits / symbol_bits) consecutive symbols, all
    erased together when it is lost.
    """

    preset: str
    p: float
    symbol_bits: int = 8

    def __post_init__(self):
        if self.preset not in PACKET_PRESETS:
            raise ChannelError(f"unknown packet preset {self.preset!r}")
        if self.symbol_bits < 1:
            raise ChannelError("symbol size must be positive")
        _prob("p", self.p)

    def packet_bits(self, count: int, rng: np.random.Generator) -> np.ndarray:
        lo, hi, mid = PACKET_PRESETS[self.preset]
        kind = rng.choice(3, size=count, p=[lo, hi, mid])
        between = rng.integers(ACK_BITS, MAX_BITS + 1, size=count)
        return np.where(kind == 0, ACK_BITS, np.where(kind == 1, MAX_BITS, between))

    def mask(self, length: int, rng: np.random.Generator) -> np.ndarray:
        out = np.zeros(length, dtype=bool)
        pos = 0
        while pos < length:
            bits = self.packet_bits(256, rng)
            lost = rng.random(256) < self.p
            for b, gone in zip(bits, lost):
                run = -(-int(b) // self.symbol_bits)
                if gone:
                    out[pos:pos + run] = True
                pos += run
                if pos >= length:
                    break
        return out

    def describe(self) -> str:
        return f"packets(preset={self.preset},p={self.p:g},symbol_bits={self.symbol_bits})"


@dataclass(frozen=True)
class Explicit:
    pattern: tuple[int, ...]

    def mask(self, length: int, rng: np.random.Generator | None = None) -> np.ndarray:
        out = np.zeros(length, dtype=bool)
        idx = np.asarray(self.pattern, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= length):
            raise ChannelError("explicit pattern index outside the stream")
        out[idx] = True
        return out

    def describe(self) -> str:
        return f"explicit(count={len(self.pattern)})"


ErasureModel = IID | GilbertElliott | Windowed | PacketLoss | Explicit


def sample_pattern(model: ErasureModel, length: int, seed=None) -> np.ndarray:
    """Sorted erased indices for a stream of ``length`` symbols."""
    if length <= 0:
        raise ChannelError("pattern length must be positive")
    return np.flatnonzero(model.mask(length, _rng(seed)))


def max_erasures_in_window(pattern: Sequence[int], length: int, w: int) -> int:
    mask = np.zeros(length, dtype=bool)
    mask[np.asarray(pattern, dtype=np.int64)] = True
    return int(kernels.max_window_count(mask, w))


def satisfies_window_bound(pattern: Sequence[int], length: int, e: int, w: int) -> bool:
    """True if no run of w consecutive symbols holds more than e erasures."""
    return max_erasures_in_window(pattern, length, w) <= e


def two_burst_pattern(burst: int, gap: int, start: int = 0) -> np.ndarray:
    """Two bursts of ``burst`` erasures separated by ``gap`` clean symbols."""
    first = np.arange(start, start + burst)
    return np.concatenate([first, first + burst + gap])


def scaled_two_burst(code: ConvCode) -> tuple[int, int]:
    """Burst and gap lengths keeping the 60 : 80 : 60 shape against a window
    of (L+1)(n-k) correctable erasures (101 for L = 100, rate 1/2)."""
    cap = (code.L + 1) * (code.n - code.k)
    burst = max(1, round(cap * 60 / 101))
    gap = round(burst * 4 / 3)
    return burst, gap


# ---------------------------------------------------------------------------
# adversarial patterns
# ---------------------------------------------------------------------------

def first_block_unique(code: ConvCode, pattern: Sequence[int], blocks: int) -> bool:
    """Whether the erasures of block 0 are pinned down by the parity rows of
    blocks 0..blocks-1 (zero state before block 0)."""
    f = code.field
    Hj = truncate(code.H, blocks - 1)
    cols = list(pattern)
    sol = gf.rank_and_solve(f, Hj[:, cols], np.zeros(Hj.shape[0], dtype=np.int64))
    return bool(all(sol.determined[i] for i, c in enumerate(cols) if c < code.n))


def adversarial_pattern(code: ConvCode, budget: int = 100_000) -> tuple[int, ...] | None:
    """First pattern (lexicographic) of (L+2)(n-k) erasures within (L+2)n
    symbols whose first erased block stays ambiguous even with all L+2
    blocks of parity rows.  Returns offsets from the window start."""
    blocks = code.L + 2
    size = blocks * (code.n - code.k)
    tried = 0
    for pat in itertools.combinations(range(blocks * code.n), size):
        if pat[0] >= code.n:
            break
        if tried >= budget:
            return None
        tried += 1
        if not first_block_unique(code, pat, blocks):
            return pat
    return None


# ---------------------------------------------------------------------------
# pattern files
# ---------------------------------------------------------------------------

def format_pattern(pattern: Sequence[int], length: int, description: str) -> str:
    lines = [f"# length={length} model={description}"]
    lines += [str(int(i)) for i in pattern]
    return "\n".join(lines) + "\n"


def parse_pattern(text: str) -> tuple[np.ndarray, int, str]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ChannelError("pattern file must start with a '# length=... model=...' header")
    fields = dict(tok.split("=", 1) for tok in lines[0][1:].split() if "=" in tok)
    try:
        length = int(fields["length"])
    except (KeyError, ValueError) as exc:
        raise ChannelError("pattern header lacks a length") from exc
    idx = np.array([int(x) for x in lines[1:] if x.strip()], dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= length or np.any(np.diff(idx) <= 0)):
        raise ChannelError("pattern indices must be increasing and inside the stream")
    return idx, length, fields.get("model", "")


def write_pattern(path: str | os.PathLike, pattern, length: int, description: str) -> None:
    with open(path, "w") as fh:
        fh.write(format_pattern(pattern, length, description))


def read_pattern(path: str | os.PathLike) -> tuple[np.ndarray, int, str]:
    with open(path) as fh:
        return parse_pattern(fh.read())


def chi_square_iid(mask: np.ndarray, p: float) -> float:
    """Pearson statistic of erasure counts against Binomial(len, p) (1 d.o.f.)."""
    n = mask.size
    obs = int(mask.sum())
    exp1 = n * p
    exp0 = n * (1 - p)
    return (obs - exp1) ** 2 / exp1 + ((n - obs) - exp0) ** 2 / exp0 if 0 < p < 1 else math.nan
