"""Command-line entry point.

    casimir-bec <potential|spectrum|bdg|dsf|bragg> --config FILE --out DIR
    casimir-bec validate [--out DIR]

Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
import time

from .benchmarks import validate_reference
from .config import parse_config
from .emit import write_csv
from .errors import CasimirBecError, ConfigurationError
from .pipeline import COMMANDS, run_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimir-bec",
        description="Casimir-Polder band gaps of an elongated BEC and their "
                    "Bragg-spectroscopy observables",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "potential": "lateral Casimir potential coefficients and profile",
        "spectrum": "perturbative gaps and zone-edge branches",
        "bdg": "exact Bogoliubov-de Gennes bands and oracle comparison",
        "dsf": "LDA dynamic structure factor at the probe wavenumber",
        "bragg": "momentum-transfer time series for the configured pulse",
    }
    for command in COMMANDS:
        p = sub.add_parser(command, help=helps[command])
        p.add_argument("--config", required=True, help="run configuration file")
        p.add_argument("--out", required=True, help="output directory for tables")
    v = sub.add_parser("validate", help="recompute the built-in reference table")
    v.add_argument("--out", default=None, help="optional directory for validation_table.csv")
    return parser


def _print_validation(table) -> None:
    widths = (28, 12, 14, 12, 10, 6)
    header = ("quantity", "expected", "computed", "deviation", "tolerance", "status")
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in table.rows:
        cells = (
            row.quantity,
            f"{row.expected:.6g}",
            f"{row.computed:.6g}",
            f"{row.deviation:.3g}",
            f"{row.mode} {row.tolerance:.3g}",
            "pass" if row.passed else "FAIL",
        )
        print("  ".join(c.ljust(w) for c, w in zip(cells, widths)))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        started = time.perf_counter()
        table = validate_reference()
        elapsed = time.perf_counter() - started
        _print_validation(table)
        print(f"# {sum(r.passed for r in table.rows)}/{len(table.rows)} rows pass "
              f"in {elapsed:.1f} s")
        if args.out is not None:
            from pathlib import Path

            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            write_csv(out / "validation_table.csv",
                      ["quantity", "expected", "computed", "deviation", "tolerance",
                       "mode", "status"],
                      table.to_rows())
        return 0 if table.all_pass else 1

    try:
        config = parse_config(args.config)
    except ConfigurationError as exc:
        print(f"configuration error:\n{exc}", file=sys.stderr)
        return 2
    try:
        summary = run_scenario(config, args.command, args.out)
    except CasimirBecError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return 2
    print(f"{args.command}: wrote {', '.join(summary['files'])} to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
