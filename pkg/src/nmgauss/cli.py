"""Command-line entry point: ``nmgauss --config sweep.yaml [--verify]``.

Exit codes: 0 success, 1 verification failed, 2 bad config or arguments,
3 unphysical state encountered during the sweep.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .errors import ConfigError, UnphysicalStateError
from .sweep import load_config, resolve_output, run_sweep, verify_mode, write_csv

EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_UNPHYSICAL = 3


def build_parser():
    p = argparse.ArgumentParser(prog="nmgauss", description=__doc__.splitlines()[0])
    p.add_argument("--config", required=True, help="flat key: value sweep config file")
    p.add_argument("--out", help="output CSV path (overrides config and NMGAUSS_OUT)")
    p.add_argument("--verify", action="store_true", help="also check against the oracles")
    p.add_argument("--mode", choices=("short-time", "exact"), help="propagator mode")
    p.add_argument("--format", choices=("csv",), default="csv")
    return p


def main(argv=None, propagator=None):
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.mode:
            config = replace(config, mode=args.mode)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        curves = run_sweep(config)
    except UnphysicalStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNPHYSICAL
    for path in write_csv(curves, resolve_output(config, args.out), scaled=config.scaled):
        print(path)
    if args.verify or config.verify:
        report = verify_mode(config, propagator=propagator)
        for line in report.lines():
            print(line)
        if not report.ok:
            return EXIT_VERIFY
    return 0


if __name__ == "__main__":
    sys.exit(main())
