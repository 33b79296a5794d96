"""Experiment runners: erasure trials, the two-burst scenario, storage counts."""
from __future__ import annotations

import io
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .analysis import MdpCertificate
from .baseline import MdsBlockCode, mds_decode_erasures, mds_encode, mds_stream_recovery
from .channel import ErasureModel, scaled_two_burst, two_burst_pattern
from .codec import ConvCode, encode, erase
from .decode import WindowPolicy, decode_sliding, decode_via_generator
from .errors import IntegrityError
from .gf import Field

DECODERS = ("sliding", "generator", "mds")


@dataclass(frozen=True)
class ExperimentConfig:
    code: ConvCode
    model: ErasureModel
    trials: int = 100
    blocks: int = 1000
    seed: int = 0
    decoders: tuple[str, ...] = DECODERS
    policy: WindowPolicy = WindowPolicy()
    mds: MdsBlockCode | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.blocks <= self.code.memory:
            raise ValueError("stream must be longer than the generator memory")
        unknown = set(self.decoders) - set(DECODERS)
        if unknown:
            raise ValueError(f"unknown decoders: {sorted(unknown)}")
        if "mds" in self.decoders and self.mds is None:
            object.__setattr__(self, "mds", default_mds(self.code))


def default_mds(code: ConvCode) -> MdsBlockCode:
    """Block code matched to one decoding window: [(L+1)n, (L+1)k]."""
    N = (code.L + 1) * code.n
    K = (code.L + 1) * code.k
    return MdsBlockCode(code.field, N, K)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    injected: int
    recovered: dict[str, int]
    lost_blocks: dict[str, int]
    windows: dict[int, int]
    wall_time: float = 0.0

    def rate(self, decoder: str) -> float:
        return 1.0 if self.injected == 0 else self.recovered[decoder] / self.injected


@dataclass
class TrialSummary:
    config: ExperimentConfig
    records: list[TrialRecord] = field(default_factory=list)

    @property
    def symbols(self) -> int:
        return self.config.blocks * self.config.code.n

    def erasure_fraction(self) -> float:
        return float(np.mean([r.injected for r in self.records])) / self.symbols

    def recovery_rate(self, decoder: str) -> float:
        return float(np.mean([r.rate(decoder) for r in self.records]))

    def confidence_interval(self, decoder: str, z: float = 1.96) -> tuple[float, float]:
        rates = np.array([r.rate(decoder) for r in self.records])
        if rates.size < 2:
            return float(rates.mean()), float(rates.mean())
        half = z * rates.std(ddof=1) / math.sqrt(rates.size)
        return max(0.0, rates.mean() - half), min(1.0, rates.mean() + half)

    def lost_blocks(self, decoder: str) -> int:
        return sum(r.lost_blocks[decoder] for r in self.records)

    def window_histogram(self) -> dict[int, int]:
        c: Counter = Counter()
        for r in self.records:
            c.update(r.windows)
        return dict(sorted(c.items()))


def run_trial(config: ExperimentConfig, index: int) -> TrialRecord:
    code = config.code
    t0 = time.perf_counter()
    rng = np.random.default_rng([config.seed, index])
    n_msg = config.blocks - code.memory
    u = code.field.random(rng, (n_msg, code.k))
    sent = encode(code, u, terminated=True)
    mask = config.model.mask(len(sent), np.random.default_rng([config.seed, index, 1]))
    received = erase(sent, np.flatnonzero(mask))
    injected = received.num_erased
    recovered: dict[str, int] = {}
    lost: dict[str, int] = {}
    windows: dict[int, int] = {}
    if "sliding" in config.decoders:
        rep = decode_sliding(code, received, config.policy, terminated=True)
        _check_safe(rep.stream, sent, "sliding")
        recovered["sliding"] = rep.recovered_symbols
        lost["sliding"] = rep.lost_blocks
        lv = rep.window_level[rep.window_level >= 0]
        windows = {int(j): int(c) for j, c in zip(*np.unique(lv, return_counts=True))}
    if "generator" in config.decoders:
        msg, rep = decode_via_generator(code, received, config.policy, terminated=True)
        _check_safe(rep.stream, sent, "generator")
        ok = ~msg.erased
        if not np.array_equal(msg.values[ok], u.reshape(-1)[ok]):
            raise IntegrityError("generator decoder produced a wrong message symbol")
        recovered["generator"] = rep.recovered_symbols
        lost["generator"] = rep.lost_blocks
    if "mds" in config.decoders:
        rec = mds_stream_recovery(config.mds, received.erased, np.random.default_rng([config.seed, index, 2]))
        recovered["mds"] = int(rec.sum())
        N = config.mds.N
        pad = -len(rec) % N
        left = np.concatenate([received.erased & ~rec, np.zeros(pad, dtype=bool)])
        lost["mds"] = int(left.reshape(-1, N).any(axis=1).sum())
    return TrialRecord(index, injected, recovered, lost, windows, time.perf_counter() - t0)


def _check_safe(decoded, sent, name: str) -> None:
    ok = ~decoded.erased
    if not np.array_equal(decoded.values[ok], sent.values[ok]):
        raise IntegrityError(f"{name} decoder emitted a wrong symbol")


def run_experiment(config: ExperimentConfig) -> TrialSummary:
    summary = TrialSummary(config)
    for i in range(config.trials):
        summary.records.append(run_trial(config, i))
    return summary


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

SUMMARY_HEADER = ["model", "trials", "blocks", "erasure_fraction", "decoder",
                  "recovery_rate", "ci_low", "ci_high", "lost_blocks"]


def summary_rows(summary: TrialSummary) -> list[list[str]]:
    c = summary.config
    rows = []
    for d in c.decoders:
        lo, hi = summary.confidence_interval(d)
        name = d if d != "mds" else f"mds[{c.mds.N},{c.mds.K}]"
        rows.append([c.model.describe(), str(c.trials), str(c.blocks),
                     f"{summary.erasure_fraction():.6f}", name,
                     f"{summary.recovery_rate(d):.6f}", f"{lo:.6f}", f"{hi:.6f}",
                     str(summary.lost_blocks(d))])
    return rows


def trial_rows(summary: TrialSummary, timing: bool = False) -> tuple[list[str], list[list[str]]]:
    decs = summary.config.decoders
    header = ["model", "trial", "injected"] + [f"recovered_{d}" for d in decs] \
        + [f"lost_blocks_{d}" for d in decs] + ["windows"]
    if timing:
        header.append("wall_time")
    rows = []
    for r in summary.records:
        hist = ";".join(f"{j}:{c}" for j, c in sorted(r.windows.items()))
        row = [summary.config.model.describe(), str(r.trial), str(r.injected)]
        row += [str(r.recovered[d]) for d in decs] + [str(r.lost_blocks[d]) for d in decs]
        row.append(hist)
        if timing:
            row.append(f"{r.wall_time:.6f}")
        rows.append(row)
    return header, rows


def to_csv(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    import csv
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def to_text_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(header)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
    lines = [ln.rstrip() for ln in lines + [fmt.format(*r) for r in rows]]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# two-burst scenario
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwoBurstResult:
    burst: int
    gap: int
    start: int
    conv_recovered: int
    conv_injected: int
    conv_lost_blocks: int
    window_levels: tuple[int, ...]
    mds: tuple[int, int]
    mds_lost: bool
    exceeds_window_bound: bool

    @property
    def conv_complete(self) -> bool:
        return self.conv_recovered == self.conv_injected


def two_burst_scenario(code: ConvCode, seed: int = 0, burst: int | None = None,
                       gap: int | None = None, policy: WindowPolicy | None = None) -> TwoBurstResult:
    """Two erasure bursts that overload one full window and one MDS block.

    The convolutional side gets a clean history of 2(L+1) blocks, the bursts,
    and 2(L+1) clean blocks after them; the MDS side gets one block of
    2*burst+gap symbols holding the same pattern.
    """
    from .channel import max_erasures_in_window

    b0, g0 = scaled_two_burst(code)
    burst = b0 if burst is None else burst
    gap = g0 if gap is None else gap
    n, L = code.n, code.L
    span = 2 * burst + gap
    start = 2 * (L + 1) * n
    blocks = 2 * (L + 1) + -(-span // n) + 2 * (L + 1)
    rng = np.random.default_rng(seed)
    u = code.field.random(rng, (blocks - code.memory, code.k))
    sent = encode(code, u, terminated=True)
    pattern = two_burst_pattern(burst, gap, start)
    rep = decode_sliding(code, erase(sent, pattern), policy, terminated=True)
    _check_safe(rep.stream, sent, "sliding")
    levels = tuple(int(x) for x in rep.window_level if x >= 0)
    exceeds = max_erasures_in_window(pattern, len(sent), (L + 1) * n) > (L + 1) * (n - code.k)

    N = span + (-span % n)
    K = N * code.k // n
    mds = MdsBlockCode(code.field, N, K)
    msg = code.field.random(rng, K)
    cw = mds_encode(mds, msg)
    rx = [None if i < burst or burst + gap <= i < span else int(x) for i, x in enumerate(cw)]
    got = mds_decode_erasures(mds, rx)
    return TwoBurstResult(burst, gap, start, rep.recovered_symbols, rep.injected, rep.lost_blocks,
                          levels, (N, K), got is None, exceeds)


def full_scale_mds_two_burst(field: Field, seed: int = 0) -> bool:
    """[200,100] code, bursts of 60 with 80 clean between: True if lost."""
    mds = MdsBlockCode(field, 200, 100)
    rng = np.random.default_rng(seed)
    msg = field.random(rng, 100)
    cw = mds_encode(mds, msg)
    erased = set(two_burst_pattern(60, 80).tolist())
    rx = [None if i in erased else int(x) for i, x in enumerate(cw)]
    return mds_decode_erasures(mds, rx) is None


# ---------------------------------------------------------------------------
# storage
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StorageReport:
    n: int
    k: int
    delta: int
    generator_degree: int
    N: int
    K: int

    @property
    def conv_coefficients(self) -> int:
        """Coefficients of the n x k generator up to its degree."""
        return self.n * self.k * (self.generator_degree + 1)

    @property
    def conv_polynomial_count(self) -> int:
        """n*k polynomials of degree deg G, counted as deg G elements each."""
        return self.n * self.k * self.generator_degree

    @property
    def mds_points(self) -> int:
        return self.N

    def text(self) -> str:
        return (
            f"convolutional ({self.n},{self.k},{self.delta}), generator degree {self.generator_degree}\n"
            f"  generator coefficients n*k*(deg+1): {self.conv_coefficients}\n"
            f"  polynomial count n*k*deg:           {self.conv_polynomial_count}\n"
            f"block [{self.N},{self.K}]\n"
            f"  evaluation points N:                {self.mds_points}\n"
        )


def storage_report(n: int, k: int, delta: int, N: int, K: int,
                   generator_degree: int | None = None) -> StorageReport:
    if generator_degree is None:
        generator_degree = -(-delta // k)
    return StorageReport(n, k, delta, generator_degree, N, K)


def format_certificate(cert: MdpCertificate, code: ConvCode, source: str,
                       wall_time: float | None = None,
                       profile: Sequence[int] | None = None) -> str:
    lines = [
        f"code: {source}",
        f"parameters: n={code.n} k={code.k} delta={code.delta} m={code.field.m} "
        f"modulus={code.field.modulus}",
        f"j_max: {cert.level}",
        f"verdict: {cert.verdict}",
        f"witness: {' '.join(map(str, cert.witness)) if cert.witness else '-'}",
        f"minors_checked: {cert.minors_checked}",
        f"qualifying_minors: {cert.qualifying}",
    ]
    if profile is not None:
        bounds = [(code.n - code.k) * (j + 1) + 1 for j in range(len(profile))]
        agree = (list(profile) == bounds) == cert.is_mdp
        lines.append(f"column_distances_enumerated: {' '.join(map(str, profile))}")
        lines.append(f"upper_bounds: {' '.join(map(str, bounds))}")
        lines.append(f"cross_check: {'agrees' if agree else 'DISAGREES'}")
    else:
        lines.append("cross_check: skipped (enumeration budget)")
    if wall_time is not None:
        lines.append(f"wall_time: {wall_time:.6f}")
    return "\n".join(lines) + "\n"
