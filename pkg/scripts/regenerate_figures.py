#!/usr/bin/env python3
"""Regenerate every shipped curve family into out/ (CSV + manifest).

The oracle comparison is skipped by default because it runs for a few
minutes; pass --with-oracle to include it.

Usage: python scripts/regenerate_figures.py [--out DIR] [--with-oracle]
"""

import argparse
import sys
from pathlib import Path

from qnoise_lab.cli import main as qnoise_main

ROOT = Path(__file__).resolve().parents[1]

ANALYTIC = ["fig2", "fig5", "fig6", "fig8", "fig9", "fig10", "fig12"]


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=ROOT / "out")
    parser.add_argument("--with-oracle", action="store_true")
    args = parser.parse_args(argv)

    names = ANALYTIC + (["oracle_vs_analytic"] if args.with_oracle else [])
    failures = []
    for name in names:
        config = ROOT / "configs" / f"{name}.toml"
        code = qnoise_main(["run", str(config), "--out", str(args.out)])
        if code != 0:
            failures.append((name, code))
    for name, code in failures:
        print(f"{name}: exited {code}", file=sys.stderr)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(run())
