"""Solve every built-in scenario and write its trajectory table.

Produces one output directory per preset (trajectory.csv, summary.json,
config.json), ready for plotting the state, control and switching-function
curves.
"""

import argparse
import sys

from marketopt.cli import main as cli_main
from marketopt.scenarios import PRESET_NAMES


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="results/scenarios", help="output root")
    parser.add_argument("--n", type=int, default=None, help="grid intervals")
    args = parser.parse_args()

    status = 0
    for name in PRESET_NAMES:
        argv = ["solve", "--preset", name, "--out", f"{args.out}/{name}"]
        if args.n is not None:
            argv += ["--n", str(args.n)]
        code = cli_main(argv)
        print(f"{name}: exit {code}")
        status = max(status, code)
    return status


if __name__ == "__main__":
    sys.exit(main())
