"""Command-line front end for the Monte Carlo experiment harness."""

from __future__ import annotations

import argparse
import math
import os

from . import harness
from .config import make_config
from .grid import square_qam

BER_FIELDS = ["snr_db", "precoder", "p", "iters", "bits", "bit_errors", "ber", "trials",
              "clamped_trials"]
EVM_FIELDS = ["trial", "ue", "snr_db", "precoder", "p", "iters", "evm", "clamped"]
PAR_FIELDS = ["trial", "antenna", "precoder", "p", "par_db"]
PROX_FIELDS = ["instance", "size", "weight", "level", "level_ref", "level_err",
               "obj_err"]
COMPLEXITY_FIELDS = ["precoder", "iters", "real_mults", "ratio_vs_wf"]


def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _parse_phase_bits(text: str) -> list[float]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        out.append(math.inf if tok.lower() in ("inf", "infinity") else float(tok))
    return out


def _build_arms(precoders, phase_bits, iters_list) -> list[harness.Arm]:
    arms = []
    for precoder in precoders:
        if precoder == "wf-inf":
            arms.append(harness.Arm("wf-inf"))
        elif precoder in ("dr", "dr-relaxed"):
            arms.extend(harness.Arm(precoder, p, t)
                        for p in phase_bits for t in iters_list)
        else:
            # Arm validation rejects anything other than "wf" here.
            arms.extend(harness.Arm(precoder, p) for p in phase_bits)
    if not arms:
        raise ValueError("no precoder arms selected")
    return arms


def _add_common(sub: argparse.ArgumentParser, *, trials: int, snr: str,
                precoder: str, phase_bits: str, iters: str) -> None:
    sub.add_argument("--profile", choices=("desk", "full"), default="desk")
    sub.add_argument("--config", metavar="FILE", default=None,
                     help="JSON file with SystemConfig field overrides")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--trials", type=int, default=trials)
    sub.add_argument("--snr-list", default=snr, help="comma-separated SNR points in dB")
    sub.add_argument("--precoder", default=precoder,
                     help="comma-separated subset of dr,dr-relaxed,wf,wf-inf")
    sub.add_argument("--phase-bits", default=phase_bits,
                     help="comma-separated phase resolutions; 'inf' allowed")
    sub.add_argument("--iters", default=iters,
                     help="comma-separated iteration counts for the dr precoder")
    sub.add_argument("--constellation", type=int, choices=(4, 16, 64), default=None)
    sub.add_argument("--out", metavar="DIR", default=None)


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cesim",
        description="Link-level simulator for the phase-quantized constant-envelope "
                    "multiuser MIMO-OFDM downlink")
    subs = parser.add_subparsers(dest="kind", required=True)

    _add_common(subs.add_parser("ber-uncoded", help="uncoded BER sweep"),
                trials=100, snr="-10,-5,0,5,10,15", precoder="dr,wf",
                phase_bits="1,2,3", iters="20")
    _add_common(subs.add_parser("ber-coded", help="coded BER sweep"),
                trials=50, snr="0,5,10,15", precoder="dr", phase_bits="2,inf",
                iters="20")
    _add_common(subs.add_parser("evm-ccdf", help="per-user EVM samples at one SNR"),
                trials=200, snr="10", precoder="dr,wf", phase_bits="2",
                iters="1,20,100")
    _add_common(subs.add_parser("par", help="per-antenna PAR samples"),
                trials=100, snr="10", precoder="wf-inf", phase_bits="inf",
                iters="20")
    _add_common(subs.add_parser("complexity", help="real-multiplication counts"),
                trials=0, snr="10", precoder="dr,wf", phase_bits="2", iters="1,20")
    prox = subs.add_parser("prox-validate", help="clip-level grid-oracle check")
    prox.add_argument("--seed", type=int, default=0)
    prox.add_argument("--trials", type=int, default=1000, help="instance count")
    prox.add_argument("--out", metavar="DIR", default=None)
    return parser


def main(argv=None) -> int:
    args = _make_parser().parse_args(argv)
    out_dir = args.out or os.path.join("runs", args.kind)

    if args.kind == "prox-validate":
        rows = harness.run_prox_validate(args.trials, args.seed)
        harness.write_csv(os.path.join(out_dir, "prox.csv"), PROX_FIELDS, rows)
        worst_level = max(row["level_err"] for row in rows)
        worst_obj = max(row["obj_err"] for row in rows)
        print(f"prox-validate: {len(rows)} instances, "
              f"max level err {worst_level:.3e}, max objective err {worst_obj:.3e}")
        return 0

    cfg = make_config(args.profile, args.config, seed=args.seed)
    snr_list = _parse_float_list(args.snr_list)
    arms = _build_arms([tok.strip() for tok in args.precoder.split(",") if tok.strip()],
                       _parse_phase_bits(args.phase_bits),
                       _parse_int_list(args.iters))
    const = square_qam(args.constellation) if args.constellation else None
    manifest_extra = {
        "seed": args.seed, "trials": args.trials, "snr_db": snr_list,
        "arms": [{"precoder": a.precoder, "p": a.p_label, "iters": a.n_iter}
                 for a in arms],
    }

    if args.kind in ("ber-uncoded", "ber-coded"):
        runner = harness.run_uncoded_ber if args.kind == "ber-uncoded" else harness.run_coded_ber
        rows, _ = runner(cfg, snr_list, arms, args.trials, const)
        harness.write_csv(os.path.join(out_dir, "ber.csv"), BER_FIELDS, rows)
        for row in rows:
            print(f"snr {row['snr_db']:+6.1f} dB  {row['precoder']:>6}/p={row['p']:<3} "
                  f"ber {row['ber']:.3e}  ({row['bit_errors']}/{row['bits']} bits, "
                  f"{row['clamped_trials']} clamped)")
    elif args.kind == "evm-ccdf":
        rows, _ = harness.run_evm(cfg, snr_list[0], arms, args.trials, const)
        harness.write_csv(os.path.join(out_dir, "evm.csv"), EVM_FIELDS, rows)
        print(f"evm-ccdf: wrote {len(rows)} samples at snr {snr_list[0]} dB")
    elif args.kind == "par":
        all_rows = []
        for arm in arms:
            rows, pooled = harness.run_par(cfg, arm, args.trials, snr_list[0], const)
            all_rows.extend(rows)
            print(f"par: {arm.precoder}/p={arm.p_label} pooled per-antenna "
                  f"range [{pooled.min():.2f}, {pooled.max():.2f}] dB")
        harness.write_csv(os.path.join(out_dir, "par.csv"), PAR_FIELDS, all_rows)
    elif args.kind == "complexity":
        rows = harness.run_complexity(cfg, _parse_int_list(args.iters))
        harness.write_csv(os.path.join(out_dir, "complexity.csv"),
                          COMPLEXITY_FIELDS, rows)
        for row in rows:
            print(f"{row['precoder']:>3} T={row['iters']:<4} "
                  f"{row['real_mults']:>14d} real mults  "
                  f"ratio {row['ratio_vs_wf']:.4f}")
    else:  # pragma: no cover - argparse enforces the choices
        raise AssertionError(args.kind)

    harness.write_manifest(out_dir, args.kind, cfg, manifest_extra)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
