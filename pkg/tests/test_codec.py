import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mdpconv.codec import (CodeError, SymbolStream, code_from_parity, encode, erase, format_code,
                           make_code, parse_code, read_code, singleton_bound, window_parameter,
                           write_code)
from mdpconv.gf import default_field
from mdpconv.polymat import PolyMatrix, truncate

F = default_field(8)


def test_toy_code_parameters(toy_code):
    c = toy_code
    assert (c.n, c.k, c.delta, c.nu, c.memory, c.L) == (2, 1, 1, 1, 1, 2)
    assert c.singleton == 4
    assert (c.H @ c.G).is_zero
    assert c.H.entry(0, 0) == [1, 1] and c.H.entry(0, 1) == [1]


def test_bounds_arithmetic():
    assert singleton_bound(2, 1, 50) == 102
    assert window_parameter(2, 1, 50) == 100
    assert window_parameter(3, 1, 2) == 3
    assert singleton_bound(3, 2, 1) == 3


def test_parity_and_generator_agree(code212, code311):
    for c in (code212, code311):
        assert (c.H @ c.G).is_zero
        again = make_code(c.G, delta=c.delta)
        assert (again.H @ c.G).is_zero
        again2 = code_from_parity(c.H)
        assert again2.delta == c.delta


def test_invalid_codes():
    with pytest.raises(CodeError):
        make_code(PolyMatrix.from_entries(F, [[[1]], [[1]], [[0]]]),
                  H=PolyMatrix.from_entries(F, [[[1], [1], [1]]]))
    with pytest.raises(CodeError):
        make_code(PolyMatrix.from_entries(F, [[[0]], [[0]]]))
    with pytest.raises(CodeError):
        make_code(PolyMatrix.from_entries(F, [[[1]], [[1, 1]]]), delta=3)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_codewords_satisfy_parity(blocks, seed):
    from conftest import searched
    code = searched(2, 1, 2)
    u = F.random(np.random.default_rng(seed), (blocks, 1))
    v = encode(code, u, terminated=True)
    assert v.num_blocks == blocks + code.memory
    T = truncate(code.H, v.num_blocks - 1 + code.nu)[:, : len(v)]
    assert not F.matmul(T, v.values[:, None]).any()
    prefix = encode(code, u)
    assert np.array_equal(prefix.values, v.values[: blocks * code.n])


def test_encode_small_example(toy_code):
    v = encode(toy_code, [[1], [2]], terminated=True)
    # v(z) = (u(z), (1+z) u(z)) with u = 1 + 2z
    assert v.to_list() == [1, 1, 2, 3, 0, 2]


def test_stream_and_erase():
    s = SymbolStream.from_list(2, [1, None, 3, 4])
    assert s.num_erased == 1 and s.num_blocks == 2
    assert s.to_list() == [1, None, 3, 4]
    t = erase(s, [2])
    assert t.to_list() == [1, None, None, 4]
    assert s.to_list() == [1, None, 3, 4]
    with pytest.raises(IndexError):
        erase(s, [4])
    with pytest.raises(ValueError):
        SymbolStream.clean(3, [1, 2])
    assert SymbolStream(2, [5, 6], [True, False]).values.tolist() == [0, 6]


def test_code_file_round_trip(code311, tmp_path):
    p = tmp_path / "c.code"
    write_code(code311, p)
    assert read_code(p) == code311
    text = "# comment\n" + format_code(code311)
    assert parse_code(text) == code311


@pytest.mark.parametrize("bad", [
    "",
    "2 1 1 8 283\nG 0\n1\n",
    "2 1 1 8 283\nX 0\n1\n1\nH 1\n1 1\n0 1\n",
    "2 1 1 8 282\nG 0\n1\n1\nH 0\n1 1\n",
])
def test_malformed_code_files(bad):
    with pytest.raises((CodeError, ValueError)):
        parse_code(bad)


def test_code_file_rejects_wrong_parity(code211):
    text = format_code(code211)
    lines = text.splitlines()
    hpos = next(i for i, l in enumerate(lines) if l.startswith("H"))
    vals = lines[hpos + 1].split()
    vals[0] = str(int(vals[0]) ^ 1)
    lines[hpos + 1] = " ".join(vals)
    with pytest.raises(CodeError):
        parse_code("\n".join(lines))
