"""Command line entry point: certify, search, simulate, storage-report."""
from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import analysis, channel, harness
from .codec import CodeError, ConvCode, format_code, read_code
from .decode import WindowPolicy
from .errors import BudgetExceeded, IntegrityError
from .gf import FieldError, default_field

EXIT_OK, EXIT_CONFIG, EXIT_INTEGRITY, EXIT_UNDECIDED = 0, 1, 2, 3


class ConfigError(Exception):
    pass


def _kv(items: list[str], required: tuple[str, ...]) -> dict[str, int]:
    out = {}
    for it in items:
        if "=" not in it:
            raise ConfigError(f"expected key=value, got {it!r}")
        k, v = it.split("=", 1)
        try:
            out[k.strip()] = int(v)
        except ValueError as exc:
            raise ConfigError(f"{k} must be an integer") from exc
    missing = [k for k in required if k not in out]
    if missing:
        raise ConfigError(f"--search is missing {', '.join(missing)}")
    return out


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError as exc:
        raise ConfigError(f"bad number list {text!r}") from exc


def _write(out: Path | None, name: str, text: str) -> None:
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)


def _load_code(args, certify: bool) -> tuple[ConvCode, str, analysis.MdpCertificate | None]:
    """Code from --code or --search; certificate when one was computed."""
    if bool(args.code) == bool(args.search):
        raise ConfigError("give exactly one of --code or --search")
    if args.code:
        if not os.path.exists(args.code):
            raise ConfigError(f"code file not found: {args.code}")
        code = read_code(args.code)
        cert = analysis.is_mdp(code, args.budget) if certify else None
        return code, os.path.basename(args.code), cert
    p = _kv(args.search, ("n", "k", "delta"))
    field = default_field(p.get("m", 8))
    found = analysis.search_mdp(p["n"], p["k"], p["delta"], field, args.attempts, args.seed,
                                args.budget, certify=certify)
    if found is None:
        raise ConfigError(f"no MDP code found in {args.attempts} attempts")
    code = found
    cert = analysis.is_mdp(code, args.budget) if certify else None
    src = f"search n={p['n']} k={p['k']} delta={p['delta']} m={field.m} seed={args.seed}"
    return code, src, cert


def cmd_certify(args) -> int:
    t0 = time.perf_counter()
    code, src, cert = _load_code(args, certify=True)
    try:
        prof = analysis.column_distance_profile(code, method="enumerate").values
    except BudgetExceeded:
        prof = None
    wall = time.perf_counter() - t0 if args.timing else None
    text = harness.format_certificate(cert, code, src, wall, prof)
    sys.stdout.write(text)
    out = Path(args.out) if args.out else None
    _write(out, "code.txt", format_code(code))
    _write(out, "certificate.txt", text)
    if cert.verdict == "undecided":
        return EXIT_UNDECIDED
    return EXIT_OK


def cmd_search(args) -> int:
    args.code = None
    code, src, cert = _load_code(args, certify=not args.assume_mdp)
    text = format_code(code)
    if cert is None:
        text = "# UNCERTIFIED: drawn without an MDP check (--assume-mdp)\n" + text
    sys.stdout.write(f"# {src}\n" + text)
    _write(Path(args.out) if args.out else None, "code.txt", text)
    return EXIT_OK


def _model(args, code: ConvCode, p: float) -> channel.ErasureModel:
    if args.model == "iid":
        return channel.IID(p)
    if args.model == "ge":
        g = _floats(args.ge)
        if len(g) not in (2, 4):
            raise ConfigError("--ge takes p_gb,p_bg[,p_loss_good,p_loss_bad]")
        return channel.GilbertElliott(*g)
    if args.model == "windowed":
        e = args.e if args.e is not None else (code.L + 1) * (code.n - code.k)
        w = args.w if args.w is not None else (code.L + 1) * code.n
        return channel.Windowed(e, w, p)
    if args.model == "packets":
        return channel.PacketLoss(args.preset, p)
    if args.model == "file":
        if not args.pattern or not os.path.exists(args.pattern):
            raise ConfigError("--model file needs an existing --pattern file")
        idx, length, _ = channel.read_pattern(args.pattern)
        if length != args.blocks * code.n:
            raise ConfigError(f"pattern length {length} != blocks*n = {args.blocks * code.n}")
        return channel.Explicit(tuple(int(i) for i in idx))
    raise ConfigError(f"unknown model {args.model!r}")


def cmd_simulate(args) -> int:
    code, src, cert = _load_code(args, certify=not args.assume_mdp)
    if cert is not None and cert.verdict == "undecided":
        sys.stderr.write("MDP certification exceeded its budget\n")
        return EXIT_UNDECIDED
    if cert is not None and not cert.is_mdp:
        raise ConfigError("code is not MDP; pass --assume-mdp to run it anyway")
    out = Path(args.out) if args.out else None
    label = "UNCERTIFIED (--assume-mdp)" if cert is None else "certified MDP"
    header = f"# code: {src} ({label}) n={code.n} k={code.k} delta={code.delta} L={code.L}\n"
    policy = WindowPolicy(search=args.window_search)

    if args.scenario == "two-burst":
        r = harness.two_burst_scenario(code, seed=args.seed, policy=policy)
        lost_mds = harness.full_scale_mds_two_burst(default_field(8), args.seed)
        rows = [
            ["conv", f"({code.n},{code.k},{code.delta})", str(r.burst), str(r.gap),
             str(r.conv_injected), str(r.conv_recovered), "yes" if r.conv_complete else "no"],
            ["mds", f"[{r.mds[0]},{r.mds[1]}]", str(r.burst), str(r.gap),
             str(2 * r.burst), "0" if r.mds_lost else str(2 * r.burst), "no" if r.mds_lost else "yes"],
        ]
        if r.mds != (200, 100):
            rows.append(["mds", "[200,100]", "60", "80", "120", "0" if lost_mds else "120",
                         "no" if lost_mds else "yes"])
        head = ["decoder", "code", "burst", "gap", "injected", "recovered", "complete"]
        levels = " ".join(map(str, r.window_levels)) or "-"
        text = header + harness.to_text_table(head, rows) + f"window levels used: {levels}\n"
        sys.stdout.write(text)
        _write(out, "two_burst.csv", harness.to_csv(head, rows))
        _write(out, "two_burst.txt", text)
        return EXIT_OK

    decoders = tuple(d for d in args.decoders.split(",") if d)
    sweep = _floats(args.p)
    summaries = []
    for p in sweep:
        cfg = harness.ExperimentConfig(code, _model(args, code, p), args.trials, args.blocks,
                                       args.seed, decoders, policy)
        summaries.append(harness.run_experiment(cfg))
        if args.model in ("ge", "file"):
            break

    rows = [row for s in summaries for row in harness.summary_rows(s)]
    text = header + harness.to_text_table(harness.SUMMARY_HEADER, rows)
    if args.timing:
        total = sum(r.wall_time for s in summaries for r in s.records)
        text += f"wall_time: {total:.3f}\n"
    sys.stdout.write(text)
    _write(out, "summary.csv", harness.to_csv(harness.SUMMARY_HEADER, rows))
    _write(out, "summary.txt", text)
    trows: list[list[str]] = []
    thead: list[str] = []
    for s in summaries:
        thead, r = harness.trial_rows(s, args.timing)
        trows += r
    _write(out, "trials.csv", harness.to_csv(thead, trows))
    if args.gnuplot:
        lines = ["# p " + " ".join(decoders)]
        for p, s in zip(sweep, summaries):
            lines.append(f"{p:g} " + " ".join(f"{s.recovery_rate(d):.6f}" for d in decoders))
        _write(out, "sweep.dat", "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_storage_report(args) -> int:
    if args.code:
        if not os.path.exists(args.code):
            raise ConfigError(f"code file not found: {args.code}")
        code = read_code(args.code)
        rep = harness.storage_report(code.n, code.k, code.delta, args.mds[0], args.mds[1],
                                     code.memory)
    else:
        p = _kv(args.params, ("n", "k", "delta"))
        rep = harness.storage_report(p["n"], p["k"], p["delta"], args.mds[0], args.mds[1])
    if not 0 < rep.K <= rep.N:
        raise ConfigError("need 0 < K <= N")
    text = rep.text()
    sys.stdout.write(text)
    _write(Path(args.out) if args.out else None, "storage.txt", text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mdpconv", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def code_args(sp):
        sp.add_argument("--code", help="code file")
        sp.add_argument("--search", nargs="+", metavar="KEY=VALUE",
                        help="random search: n= k= delta= [m=8]")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--attempts", type=int, default=1000)
        sp.add_argument("--budget", type=int, default=analysis.DEFAULT_MINOR_BUDGET,
                        help="maximum number of minors to evaluate")
        sp.add_argument("--out", help="output directory")
        sp.add_argument("--timing", action="store_true", help="report wall time")

    c = sub.add_parser("certify", help="check the MDP property of a code")
    code_args(c)
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("search", help="draw a random MDP code")
    code_args(s)
    s.add_argument("--assume-mdp", action="store_true", help="skip certification")
    s.set_defaults(func=cmd_search)

    m = sub.add_parser("simulate", help="erasure trials against the decoders")
    code_args(m)
    m.add_argument("--assume-mdp", action="store_true",
                   help="run without certifying (results are labeled)")
    m.add_argument("--model", choices=["iid", "ge", "windowed", "packets", "file"],
                   default="windowed")
    m.add_argument("--p", default="0.5", help="erasure probability, or a comma list to sweep")
    m.add_argument("--e", type=int, help="windowed: erasures per window (default (L+1)(n-k))")
    m.add_argument("--w", type=int, help="windowed: window length (default (L+1)n)")
    m.add_argument("--ge", default="0.05,0.3,0,1", help="p_gb,p_bg[,p_loss_good,p_loss_bad]")
    m.add_argument("--preset", default="tcp", choices=sorted(channel.PACKET_PRESETS))
    m.add_argument("--pattern", help="pattern file for --model file")
    m.add_argument("--trials", type=int, default=100)
    m.add_argument("--blocks", type=int, default=1000)
    m.add_argument("--decoders", default="sliding,generator,mds")
    m.add_argument("--window-search", choices=["linear", "bisect"], default="linear")
    m.add_argument("--scenario", choices=["two-burst"])
    m.add_argument("--gnuplot", action="store_true", help="also write sweep.dat")
    m.set_defaults(func=cmd_simulate)

    r = sub.add_parser("storage-report", help="compare stored field elements")
    r.add_argument("--code", help="code file")
    r.add_argument("--params", nargs="+", metavar="KEY=VALUE", default=["n=2", "k=1", "delta=50"])
    r.add_argument("--mds", nargs=2, type=int, metavar=("N", "K"), default=[200, 100])
    r.add_argument("--out")
    r.set_defaults(func=cmd_storage_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return args.func(args)
    except IntegrityError as exc:
        sys.stderr.write(f"integrity error: {exc}\n")
        return EXIT_INTEGRITY
    except BudgetExceeded as exc:
        sys.stderr.write(f"undecided: {exc}\n")
        return EXIT_UNDECIDED
    except (ConfigError, CodeError, FieldError, channel.ChannelError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
