"""Command line: ``bicmb-ofdm {ber,pep,analyze,correlate} [--config PATH] [--seed N] [--out DIR] [--workers N]``."""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config
from .runner import run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bicmb-ofdm", description=__doc__.split(":")[0])
    parser.add_argument("mode", choices=["ber", "pep", "analyze", "correlate"])
    parser.add_argument("--config", help="YAML experiment config")
    parser.add_argument("--seed", type=int, help="master seed (overrides config)")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--workers", type=int, help="worker processes (overrides config)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, mode=args.mode, seed=args.seed, out=args.out,
                          workers=args.workers)
        out = run(cfg)
    except ConfigError as err:
        print(f"error: invalid config: {err}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    print((out / "summary.txt").read_text(), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
