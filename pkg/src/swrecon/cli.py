"""Command line entry point: ``swrecon run <config> [--override k=v] [--out dir] [--svg]``."""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .config import ConfigError, parse_config
from .solver import SolverError

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER = 0, 2, 3


def _parse_override(text: str):
    if "=" not in text:
        raise ConfigError(f"override must be key=value, got {text!r}")
    key, value = text.split("=", 1)
    return key.strip(), value.strip()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swrecon", description="Shallow-water scenario runner")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario from a config file")
    run.add_argument("config", help="path to a key = value config file")
    run.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                     help="override a config entry (repeatable)")
    run.add_argument("--out", default=".", help="output directory")
    run.add_argument("--svg", action="store_true", help="also write an SVG figure")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    from .scenarios import run

    try:
        with open(args.config) as fh:
            text = fh.read()
        overrides = dict(_parse_override(o) for o in args.override)
        cfg = parse_config(text, overrides)
    except (ConfigError, OSError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        art = run(cfg, args.out, svg=args.svg)
    except SolverError as err:
        print(f"solver error: {err}", file=sys.stderr)
        return EXIT_SOLVER
    for name, path in sorted(art.paths.items()):
        print(f"{name}: {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
