#!/usr/bin/env python3
"""Emit a telescoping fixture (certificate + summand table + window) as
JSON files for the `qtspp ore telescope` command, optionally with a
single-coefficient mutation that the checker must reject.

Usage: python scripts/make_telescoping_fixture.py OUTDIR [--seed 0]
           [--width 4] [--mutate]
"""

import argparse
import json
import pathlib
import random
import sys

from qtspp.fixtures import build_telescoping_fixture, mutate_fixture


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir", type=pathlib.Path)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--width", type=int, default=4)
    ap.add_argument("--mutate", action="store_true")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    fix = build_telescoping_fixture(rng, width=args.width)
    if args.mutate:
        fix = mutate_fixture(fix, rng)
    args.outdir.mkdir(parents=True, exist_ok=True)
    (args.outdir / "certificate.json").write_text(json.dumps(fix.certificate.to_json(), indent=2))
    (args.outdir / "summand.json").write_text(json.dumps(fix.summand.to_json(), indent=2))
    j0, j1 = fix.window
    print(f"wrote certificate.json and summand.json to {args.outdir}")
    print(
        f"check with: qtspp ore telescope --cert {args.outdir}/certificate.json "
        f"--summand {args.outdir}/summand.json --from {j0} --to {j1}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
