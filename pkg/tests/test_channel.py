import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdpconv.channel import (IID, ChannelError, Explicit, GilbertElliott, PacketLoss, Windowed,
                             adversarial_pattern, chi_square_iid, first_block_unique,
                             format_pattern, max_erasures_in_window, parse_pattern, read_pattern,
                             sample_pattern, satisfies_window_bound, scaled_two_burst,
                             two_burst_pattern, write_pattern)
from mdpconv.codec import encode, erase
from mdpconv.decode import decode_sliding

CHI2_1DOF_999 = 10.83


def brute_max_window(mask, w):
    return max(int(mask[i:i + w].sum()) for i in range(max(1, mask.size - w + 1)))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 6), st.integers(1, 12), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_windowed_respects_bound(e, w, p, seed):
    if e > w:
        return
    pat = sample_pattern(Windowed(e, w, p), 200, seed)
    mask = np.zeros(200, dtype=bool)
    mask[pat] = True
    assert brute_max_window(mask, w) <= e
    assert satisfies_window_bound(pat, 200, e, w)
    assert max_erasures_in_window(pat, 200, w) == brute_max_window(mask, w)


def test_windowed_saturates():
    pat = sample_pattern(Windowed(5, 10, 1.0), 100, 0)
    assert pat.tolist() == [i for i in range(100) if i % 10 < 5]


def test_iid_rate_and_determinism():
    a = sample_pattern(IID(0.2), 100_000, 5)
    b = sample_pattern(IID(0.2), 100_000, 5)
    assert np.array_equal(a, b)
    mask = np.zeros(100_000, dtype=bool)
    mask[a] = True
    assert chi_square_iid(mask, 0.2) < CHI2_1DOF_999


def test_gilbert_elliott_equal_loss_is_iid():
    """With the same loss probability in both states the state is irrelevant."""
    m = GilbertElliott(0.1, 0.2, 0.3, 0.3).mask(200_000, np.random.default_rng(1))
    assert chi_square_iid(m, 0.3) < CHI2_1DOF_999
    # consecutive pairs behave independently too
    both = np.mean(m[1:] & m[:-1])
    assert abs(both - 0.09) < 0.005


def test_gilbert_elliott_is_bursty():
    m = GilbertElliott(0.01, 0.1).mask(200_000, np.random.default_rng(2))
    rate = m.mean()
    assert abs(rate - 0.01 / 0.11) < 0.02
    assert np.mean(m[1:] & m[:-1]) > 5 * rate ** 2


def test_packet_loss_erases_whole_packets():
    model = PacketLoss("tcp", 0.2, symbol_bits=8)
    m = model.mask(50_000, np.random.default_rng(3))
    runs = np.diff(np.flatnonzero(np.diff(np.concatenate([[0], m.astype(int), [0]]))))[::2]
    assert runs.min() >= 40          # 320-bit acks are 40 symbols
    bits = model.packet_bits(10_000, np.random.default_rng(4))
    assert bits.min() >= 320 and bits.max() <= 12_000
    assert abs(np.mean(bits == 320) - 0.35) < 0.03


def test_model_validation():
    for bad in (lambda: IID(1.5), lambda: Windowed(5, 4), lambda: GilbertElliott(-0.1, 0.5),
                lambda: PacketLoss("voip", 0.1)):
        with pytest.raises(ChannelError):
            bad()
    with pytest.raises(ChannelError):
        Explicit((0, 10)).mask(5)
    with pytest.raises(ChannelError):
        sample_pattern(IID(0.1), 0)


def test_pattern_file_round_trip(tmp_path):
    pat = sample_pattern(IID(0.3), 50, 1)
    p = tmp_path / "x.pat"
    write_pattern(p, pat, 50, IID(0.3).describe())
    idx, length, desc = read_pattern(p)
    assert np.array_equal(idx, pat) and length == 50 and desc == "iid(p=0.3)"
    text = format_pattern([1, 2], 4, "x")
    assert parse_pattern(text)[0].tolist() == [1, 2]
    for bad in ("1\n2\n", "# length=4\n3\n1\n", "# length=4\n9\n", "# model=x\n1\n"):
        with pytest.raises(ChannelError):
            parse_pattern(bad)


def test_two_burst_shapes(code212):
    assert two_burst_pattern(3, 4, 10).tolist() == [10, 11, 12, 17, 18, 19]
    assert scaled_two_burst(code212) == (3, 4)


def test_adversarial_pattern_defeats_sliding(code211):
    pat = adversarial_pattern(code211)
    L, n, p = code211.L, code211.n, code211.n - code211.k
    assert pat is not None and len(pat) == (L + 2) * p and pat[0] < n and max(pat) < (L + 2) * n
    assert not first_block_unique(code211, pat, L + 2)
    rng = np.random.default_rng(0)
    u = code211.field.random(rng, (20, 1))
    sent = encode(code211, u, terminated=True)
    start = 4 * n
    rx = erase(sent, [start + c for c in pat])
    rep = decode_sliding(code211, rx, terminated=True)
    assert rep.lost_blocks > 0
    ok = ~rep.stream.erased
    assert np.array_equal(rep.stream.values[ok], sent.values[ok])
