import subprocess
import sys

import pytest

from mdpconv.cli import main
from mdpconv.codec import read_code, write_code


def run(args, capsys):
    rc = main(args)
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_certify_search_writes_code(tmp_path, capsys):
    rc, out, _ = run(["certify", "--search", "n=2", "k=1", "delta=2", "m=8", "--seed", "7",
                      "--out", str(tmp_path)], capsys)
    assert rc == 0
    assert "verdict: MDP" in out and "cross_check: agrees" in out
    code = read_code(tmp_path / "code.txt")
    assert (code.n, code.k, code.delta) == (2, 1, 2)
    assert (tmp_path / "certificate.txt").read_text() == out


def test_certify_non_mdp_prints_witness(toy_code, tmp_path, capsys):
    write_code(toy_code, tmp_path / "bad.code")
    rc, out, _ = run(["certify", "--code", str(tmp_path / "bad.code")], capsys)
    assert rc == 0
    assert "verdict: not-MDP" in out
    assert "witness: -" not in out


def test_exit_codes(toy_code, tmp_path, capsys):
    assert run(["certify"], capsys)[0] == 1
    assert run(["certify", "--code", str(tmp_path / "missing")], capsys)[0] == 1
    assert run(["simulate", "--search", "n=2", "k=1"], capsys)[0] == 1
    assert run(["bogus"], capsys)[0] == 1
    rc, _, err = run(["certify", "--search", "n=2", "k=1", "delta=2", "--budget", "10"], capsys)
    assert rc == 3 and "undecided" in err
    write_code(toy_code, tmp_path / "bad.code")
    rc, _, err = run(["simulate", "--code", str(tmp_path / "bad.code")], capsys)
    assert rc == 1 and "not MDP" in err
    (tmp_path / "junk.code").write_text("2 1\n")
    assert run(["certify", "--code", str(tmp_path / "junk.code")], capsys)[0] == 1
    rc = run(["search", "--search", "n=2", "k=1", "delta=1", "--attempts", "0"], capsys)[0]
    assert rc == 1


def test_integrity_exit_code(code212, tmp_path, capsys):
    import numpy as np
    from mdpconv.channel import write_pattern
    write_code(code212, tmp_path / "c.code")
    # a pattern file describing a stream of the wrong length is a config error
    write_pattern(tmp_path / "p.pat", [1, 2], 10, "x")
    rc = run(["simulate", "--code", str(tmp_path / "c.code"), "--model", "file", "--pattern",
              str(tmp_path / "p.pat"), "--blocks", "20", "--trials", "1"], capsys)[0]
    assert rc == 1
    write_pattern(tmp_path / "p.pat", [1, 2, 7], 40, "x")
    rc, out, _ = run(["simulate", "--code", str(tmp_path / "c.code"), "--model", "file",
                      "--pattern", str(tmp_path / "p.pat"), "--blocks", "20", "--trials", "1"],
                     capsys)
    assert rc == 0 and "explicit(count=3)" in out


def test_simulate_outputs(code212, tmp_path, capsys):
    write_code(code212, tmp_path / "c.code")
    out_dir = tmp_path / "o"
    rc, out, _ = run(["simulate", "--code", str(tmp_path / "c.code"), "--model", "iid",
                      "--p", "0.1,0.4", "--trials", "4", "--blocks", "50", "--seed", "3",
                      "--gnuplot", "--out", str(out_dir)], capsys)
    assert rc == 0
    summary = (out_dir / "summary.csv").read_text().splitlines()
    assert summary[0].startswith("model,trials,blocks,erasure_fraction,decoder,recovery_rate")
    assert len(summary) == 1 + 2 * 3
    trials = (out_dir / "trials.csv").read_text().splitlines()
    assert len(trials) == 1 + 2 * 4
    assert (out_dir / "sweep.dat").read_text().startswith("# p sliding generator mds")
    assert "wall_time" not in out


def test_two_burst_cli(code212, tmp_path, capsys):
    write_code(code212, tmp_path / "c.code")
    rc, out, _ = run(["simulate", "--code", str(tmp_path / "c.code"), "--scenario",
                      "two-burst", "--out", str(tmp_path)], capsys)
    assert rc == 0
    rows = (tmp_path / "two_burst.csv").read_text().splitlines()
    assert rows[1].endswith(",yes") and rows[2].endswith(",no") and rows[3].endswith(",no")


def test_assume_mdp_is_labeled(capsys):
    rc, out, _ = run(["search", "--search", "n=2", "k=1", "delta=3", "--assume-mdp"], capsys)
    assert rc == 0 and "UNCERTIFIED" in out


def test_storage_report_cli(capsys):
    rc, out, _ = run(["storage-report"], capsys)
    assert rc == 0 and "102" in out and "100" in out and "200" in out
    rc, out, _ = run(["storage-report", "--params", "n=2", "k=1", "delta=1", "--mds", "4", "2"],
                     capsys)
    assert "n*k*(deg+1): 4" in out and "N:                4" in out


def test_console_script_help():
    r = subprocess.run([sys.executable, "-m", "mdpconv.cli", "--help"], capture_output=True,
                       text=True)
    assert r.returncode == 0
    for cmd in ("certify", "simulate", "storage-report", "search"):
        assert cmd in r.stdout
