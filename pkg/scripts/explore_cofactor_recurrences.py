#!/usr/bin/env python3
"""Open-ended experiment: hunt for small-structure recurrences on cofactor
data, mirroring the guess-and-validate workflow at desk scale.

The diagonal sequence has a tiny annihilator (found immediately); the full
bivariate cofactor table is the interesting case, where realistic
annihilators are far beyond desk-scale structures, so an exhausted budget
is the expected outcome for small bounds. Whatever validates is printed.

Usage: python scripts/explore_cofactor_recurrences.py [--n-max 24]
           [--max-shift 3] [--max-degree 4] [--budget 120] [--seed 0]
"""

import argparse
import random
import sys
import time

from qtspp.guess import build_table, escalate
from qtspp.qfield import PrimePoint


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-max", type=int, default=24)
    ap.add_argument("--max-shift", type=int, default=3)
    ap.add_argument("--max-degree", type=int, default=4)
    ap.add_argument("--budget", type=float, default=120.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    pp = PrimePoint.random(rng, bits=29)
    print(f"modular window at {pp}")

    t0 = time.monotonic()
    table = build_table(range(1, args.n_max + 1), "cofactors", mode="mod", prime_point=pp)
    print(f"cofactor table: {len(table)} points in {time.monotonic()-t0:.2f}s")

    for label, tbl, diagonal in (
        ("diagonal sequence", build_table(range(1, args.n_max + 1), "diagonal", mode="mod", prime_point=pp), True),
        ("full cofactor table", table, False),
    ):
        t0 = time.monotonic()
        report = escalate(
            tbl,
            max_total_shift=args.max_shift,
            max_degree=args.max_degree,
            budget_seconds=args.budget,
            diagonal=diagonal,
            seed=args.seed,
            oversample=6,
            holdout=8,
        )
        took = time.monotonic() - t0
        if report is None:
            print(f"{label}: nothing validated within bounds/budget ({took:.1f}s)")
            continue
        print(
            f"{label}: validated stencil={list(report.structure.stencil)} "
            f"degrees={list(report.structure.degrees)} with {len(report.operators)} "
            f"operator(s) over primes {report.primes_used} ({took:.1f}s)"
        )
        for op in report.operators[:4]:
            print(f"    {op}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
