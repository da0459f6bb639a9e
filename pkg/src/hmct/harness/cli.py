"""Command line entry point: ``hmct single|sweep|crlb``."""
from __future__ import annotations

import argparse
import math
import sys

from ..estimator import crlb
from .config import CHANNELS, ConfigError, SimConfig, load_config
from .runner import run_sweep, run_trial, sweep_csv


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--trials", type=int)
    p.add_argument("--snr-db", type=float, nargs="+", metavar="DB", help="SNR points in dB ('inf' allowed)")
    p.add_argument("--channel", choices=CHANNELS)
    p.add_argument("--eps", type=float, help="fixed normalized CFO (disables uniform draws)")
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--workers", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hmct", description="HMCT preamble CFO estimation simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    single = sub.add_parser("single", help="run one trial and print the result")
    _common(single)
    single.add_argument("--index", type=int, default=0, help="trial index")

    sweep = sub.add_parser("sweep", help="MSE vs SNR table as CSV")
    _common(sweep)

    bound = sub.add_parser("crlb", help="print the CRLB for a list of SNRs")
    bound.add_argument("--config")
    bound.add_argument("--snr-db", type=float, nargs="+", metavar="DB")
    bound.add_argument("--n", type=int, help="number of subcarriers")
    bound.add_argument("--m", type=int, help="samples per symbol period")
    return parser


def _config(args) -> SimConfig:
    cfg = load_config(args.config) if args.config else SimConfig()
    changes = {}
    if getattr(args, "seed", None) is not None:
        changes["master_seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        changes["trials"] = args.trials
    if args.snr_db is not None:
        changes["snr_db_list"] = tuple(args.snr_db)
    if getattr(args, "channel", None) is not None:
        changes["channel"] = args.channel
    if getattr(args, "eps", None) is not None:
        changes["eps_mode"], changes["eps"] = "fixed", args.eps
    if getattr(args, "out", None) is not None:
        changes["out"] = args.out
    if getattr(args, "workers", None) is not None:
        changes["workers"] = args.workers
    return cfg.replace(**changes) if changes else cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        if args.command == "crlb":
            n = args.n if args.n is not None else cfg.lattice.n_sub
            m = args.m if args.m is not None else cfg.lattice.m_samples
            print("snr_db,crlb")
            for snr in cfg.snr_db_list:
                bound = crlb(n, m, 10 ** (snr / 10)) if math.isfinite(snr) else 0.0
                print(f"{snr:.9g},{bound:.9g}")
        elif args.command == "single":
            for snr in cfg.snr_db_list[:1]:
                result = run_trial(cfg, snr, args.index)
                for key, value in vars(result).items():
                    print(f"{key}={value:.9g}" if isinstance(value, float) else f"{key}={value}")
        else:
            rows = run_sweep(cfg)
            if not cfg.out:
                sys.stdout.write(sweep_csv(rows))
    except (ConfigError, ValueError, OSError) as exc:
        print(f"hmct: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
