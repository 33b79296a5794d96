"""Compiled kernels vs the pure-numpy fallback.

Each mode runs in its own interpreter because the backend is fixed at
import time by MDPCONV_NO_NUMBA.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from mdpconv import _accel, kernels
from mdpconv.analysis import column_distance, search_mdp
from mdpconv.channel import Windowed
from mdpconv.codec import encode, erase
from mdpconv.decode import decode_sliding
from mdpconv.gf import default_field

repeat = int(sys.argv[1])
f = default_field(8)
rng = np.random.default_rng(0)
code = search_mdp(2, 1, 2, f, 1000, 7)
sent = encode(code, f.random(rng, (998, 1)), terminated=True)
rx = erase(sent, np.flatnonzero(Windowed(5, 10).mask(len(sent), rng)))
mats = [f.random(rng, (20, 24)) for _ in range(200)]

def best(fn):
    fn()                       # warm-up (includes compilation)
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter(); fn(); ts.append(time.perf_counter() - t0)
    return min(ts)

def rref_batch():
    for A in mats:
        kernels.rref(A.copy(), A.shape[1], *f.kargs)

out = {
    "backend": "numba" if _accel.USE_NUMBA else "numpy",
    "rref 200x(20x24)": best(rref_batch),
    "sliding decode 1000 blocks": best(lambda: decode_sliding(code, rx, terminated=True)),
    "column distance j=4 (enumerate)": best(lambda: column_distance(code, 4, "enumerate")),
}
print(json.dumps(out))
"""


def run(flag: str, repeat: int) -> dict:
    env = dict(os.environ, MDPCONV_NO_NUMBA=flag)
    t0 = time.perf_counter()
    r = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                       capture_output=True, text=True, check=True)
    res = json.loads(r.stdout)
    res["process wall"] = time.perf_counter() - t0
    return res


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    jit = run("0", args.repeat)
    ref = run("1", args.repeat)
    print(f"{'kernel':<34}{jit['backend']:>12}{ref['backend']:>12}{'speedup':>10}")
    for key in jit:
        if key == "backend":
            continue
        a, b = jit[key], ref[key]
        print(f"{key:<34}{a:>11.4f}s{b:>11.4f}s{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
