import os
import subprocess
import sys

import numpy as np
from hypothesis import given, settings, strategies as st

from mdpconv import kernels
from mdpconv.gf import Field


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**32 - 1), st.sampled_from([3, 8, 13]))
def test_rref_variants_agree(r, c, seed, m):
    f = Field(m)
    rng = np.random.default_rng(seed)
    A = f.random(rng, (r, c))
    if r > 2:
        A[2] = A[0] ^ A[1]
    M1, M2 = A.copy(), A.copy()
    r1, p1 = kernels._rref_loops(M1, c, *f.kargs)
    r2, p2 = kernels._rref_vec(M2, c, *f.kargs)
    assert r1 == r2 and list(p1[:r1]) == list(p2[:r2])
    assert np.array_equal(M1, M2)


def _cli(env_flag, out_dir):
    env = dict(os.environ, MDPCONV_NO_NUMBA=env_flag)
    code = subprocess.run(
        [sys.executable, "-c",
         "import sys; from mdpconv import _accel; from mdpconv.cli import main;"
         "print('numba' if _accel.USE_NUMBA else 'numpy', file=sys.stderr);"
         "sys.exit(main(sys.argv[1:]))",
         "simulate", "--search", "n=2", "k=1", "delta=1", "--seed", "4", "--model", "iid",
         "--p", "0.3", "--trials", "3", "--blocks", "40", "--out", str(out_dir)],
        env=env, capture_output=True, text=True)
    assert code.returncode == 0, code.stderr
    return code.stderr.strip().splitlines()[0]


def test_fallback_matches_compiled(tmp_path):
    assert _cli("1", tmp_path / "py") == "numpy"
    mode = _cli("0", tmp_path / "jit")
    for name in ("summary.csv", "trials.csv"):
        assert (tmp_path / "py" / name).read_bytes() == (tmp_path / "jit" / name).read_bytes()
    assert mode in ("numba", "numpy")
