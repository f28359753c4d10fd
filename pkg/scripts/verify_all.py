#!/usr/bin/env python3
"""Full desk-scale replication run: enumeration against the product
formula, Okada determinants, the five cofactor identities, and the
diagonal-constant certification; prints one line per check with timing.

Usage: python scripts/verify_all.py [--enum-max 6] [--det-max 10] [--id-max 12]
"""

import argparse
import sys
import time

from qtspp.guess import certify_constant_diagonal
from qtspp.okada import identity_reports, verify_determinant
from qtspp.qcomb import orbit_product
from qtspp.tspp import generating_polynomial


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--enum-max", type=int, default=6)
    ap.add_argument("--det-max", type=int, default=10)
    ap.add_argument("--id-max", type=int, default=12)
    args = ap.parse_args()

    failures = 0

    for n in range(args.enum_max + 1):
        t0 = time.monotonic()
        ok = generating_polynomial(n, cap=args.enum_max) == orbit_product(n)
        failures += not ok
        print(f"enumeration n={n:2d}: {'ok' if ok else 'MISMATCH'}  ({time.monotonic()-t0:6.2f}s)")

    for n in range(1, args.det_max + 1):
        t0 = time.monotonic()
        ok = verify_determinant(n, cap=max(12, args.det_max)).verified
        failures += not ok
        print(f"determinant n={n:2d}: {'ok' if ok else 'MISMATCH'}  ({time.monotonic()-t0:6.2f}s)")

    for n in range(1, args.id_max + 1):
        t0 = time.monotonic()
        reports = identity_reports(n, cap=max(12, args.id_max))
        bad = [r for r in reports if not r.verified]
        failures += len(bad)
        print(
            f"identities  n={n:2d}: {len(reports) - len(bad)}/{len(reports)} ok"
            f"  ({time.monotonic()-t0:6.2f}s)"
        )

    t0 = time.monotonic()
    cert = certify_constant_diagonal(n_max=min(12, args.id_max) if args.id_max >= 8 else 12)
    failures += not cert.concluded
    print(
        f"diagonal certification: order {cert.order}, remainder zero: {cert.remainder_zero}, "
        f"concluded: {cert.concluded}  ({time.monotonic()-t0:6.2f}s)"
    )

    print("ALL OK" if failures == 0 else f"{failures} FAILURES")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
