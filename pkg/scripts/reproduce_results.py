#!/usr/bin/env python3
"""Run every CLI command with the reference preset into one output directory.

Usage:  python scripts/reproduce_results.py [--out OUT_DIR]

Produces figure2.csv / figure2_summary.json, deflection.json,
epr_sweep.csv / epr_scenario.json, oracle_series.csv / oracle_report.json
and selftest_report.json.  Everything is deterministic; rerunning yields
byte-identical files.
"""

import argparse
import sys

from spinloop.cli import main as spinloop_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out", help="output directory (default: ./out)")
    args = parser.parse_args()
    for command in ("figure2", "deflect", "epr", "oracle", "selftest"):
        code = spinloop_main([command, "--out", args.out])
        if code != 0:
            print(f"{command} failed with exit code {code}", file=sys.stderr)
            return code
    print(f"all commands completed; outputs in {args.out}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
