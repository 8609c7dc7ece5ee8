#!/usr/bin/env python3
"""Sweep the sampled operator-property checks over the set catalog.

Prints the report table (same format as `drfeas check`) for projections,
DR operators, and composite reflections in several dimensions.

Usage:
    python scripts/operator_checks.py
    python scripts/operator_checks.py --dims 2 10 100 --samples 2000
"""

import argparse
import sys
import time

from drfeas import format_reports
from drfeas.repro import operator_class_reports


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", nargs="+", type=int, default=[2, 5, 50])
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--scale", type=float, default=4.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t0 = time.perf_counter()
    reports = operator_class_reports(
        dims=tuple(args.dims), samples=args.samples, scale=args.scale, seed=args.seed
    )
    elapsed = time.perf_counter() - t0
    print(format_reports(reports), end="")
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} pass in {elapsed:.2f}s")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
