"""Command-line entry point: ``resonance-uncertainty <command> --config FILE``.

Exit codes: 0 success, 1 config error, 2 partial convergence (or, for
``verify``, any failed check).
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .sweep import (
    ConfigError,
    Table,
    load_config,
    pole_table,
    state_dump,
    trajectory_table,
    uncertainty_sweep,
    validate,
    verify_suite,
    write_table,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_PARTIAL = 2

COMMANDS = {
    "poles": pole_table,
    "trajectory": trajectory_table,
    "uncertainty-sweep": uncertainty_sweep,
    "state-dump": state_dump,
    "verify": verify_suite,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resonance-uncertainty",
        description="Resonance poles, states and uncertainty products for the delta shell and rectangular barrier.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver warnings")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, metavar="PATH", help="INI config file")
        p.add_argument("--out", metavar="PATH", help="output file (default: [output] path or stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format (default: [output] format or csv)")
        p.add_argument("--workers", type=int, metavar="N", help="threads for sweep grid points")
        p.add_argument("--tol", type=float, metavar="FLOAT", help="Newton tolerance on |J|")
    return parser


def _summarize_verify(table: Table) -> str:
    lines = []
    for check, status, value, tol, detail in table.rows:
        extra = f"  ({detail})" if detail else ""
        lines.append(f"{status.upper():13s} {check}: {value:.3e} (tol {tol:.1e}){extra}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        overrides = {k: v for k, v in (("out", args.out), ("format", args.format),
                                       ("workers", args.workers), ("tol", args.tol)) if v is not None}
        cfg = validate(dataclasses.replace(cfg, **overrides))
        table = COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            write_table(table, cfg.format, fh)
    else:
        write_table(table, cfg.format, sys.stdout)

    if args.command == "verify":
        sys.stderr.write(_summarize_verify(table))
        if table.partial or any(row[1] == "fail" for row in table.rows):
            return EXIT_PARTIAL
        return EXIT_OK
    return EXIT_PARTIAL if table.partial else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
