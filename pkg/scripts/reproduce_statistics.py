"""Run the full statistics battery on the bundled table and print a summary.

Usage: python scripts/reproduce_statistics.py [--recompute] [--out DIR] [--workers N]
"""

import argparse
from pathlib import Path

from besicovitch.pipeline import reproduce


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--recompute", action="store_true", help="recount every C_d before testing")
    ap.add_argument("--out", type=Path, default=Path("reproduction"))
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    report = reproduce(None, args.recompute, args.out, args.workers)
    for model, st in report["statistics"].items():
        print(
            f"{model:<12} n={st['n']:<4} mean={st['mean']:+.4f} "
            f"T={st['ols']['statistic']:+.3f} W={st['shapiro_wilk']['statistic']:.4f} "
            f"p_W={st['shapiro_wilk']['p_value']:.4f} "
            f"U1={st['mw_values']['statistic']:+.3f} U2={st['mw_primes']['statistic']:+.3f}"
        )
    print()
    for c in report["checks"]:
        print(f"{'ok ' if c['pass'] else 'BAD'} {c['name']:<9} {c['got']:+.5g} (ref {c['expected']:g})")
    print(f"\nwritten to {args.out}")


if __name__ == "__main__":
    main()
