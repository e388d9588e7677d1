#!/usr/bin/env python3
"""Run the time-domain cross-checks and print a per-channel score table.

Usage: python scripts/oracle_report.py [--seed N] [--trajectories N]
                                       [--cases standard,parametric,qnd]
"""

import argparse
import time

from qnoise_lab import oracle_cases


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--trajectories", type=int, default=200)
    parser.add_argument("--cases", default="standard,parametric,qnd")
    args = parser.parse_args(argv)

    wanted = [c.strip() for c in args.cases.split(",") if c.strip()]
    cfg = {
        name: {"enabled": name in wanted, "n_trajectories": args.trajectories}
        for name in ("standard", "parametric", "qnd")
    }
    t0 = time.perf_counter()
    results = oracle_cases.run_cases(cfg, seed=args.seed)
    elapsed = time.perf_counter() - t0

    print(f"{'case':20s} {'channel':8s} {'points':>7s} {'<=3sig':>8s} {'max|sig|':>9s}")
    worst = 1.0
    for case in results:
        for ch in case.channels:
            worst = min(worst, ch.fraction_within_3sigma)
            print(
                f"{case.name:20s} {ch.label:8s} {ch.n_points:7d} "
                f"{ch.fraction_within_3sigma:8.3f} {ch.max_abs_sigma:9.2f}"
            )
    print(f"\nseed {args.seed}, {args.trajectories} trajectories per case, {elapsed:.0f}s")
    ok = worst >= 0.95
    print("verdict:", "OK (>= 95% of grid points within 3 sigma)" if ok else "DEVIATION")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(run())
