"""Compare sampled all-but-simple counts of random minimal arrangements with A_d.

Usage: python scripts/montecarlo_sweep.py [--max-d 61] [--samples 20000] [--seed 0]
"""

import argparse

from besicovitch.cli import montecarlo_row
from besicovitch.field import primes_in_range


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-d", type=int, default=61)
    ap.add_argument("--samples", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'d':>5} {'mean':>11} {'A_d':>11} {'stderr':>8} {'z':>6}")
    worst = 0.0
    for d in primes_in_range(3, args.max_d):
        r = montecarlo_row(d, args.samples, args.seed + d)
        worst = max(worst, abs(r["z_gap"]))
        print(f"{d:>5} {r['mean']:>11.4f} {r['A_d']:>11.4f} {r['stderr']:>8.4f} {r['z_gap']:>+6.2f}")
    print(f"max |z| = {worst:.2f}")


if __name__ == "__main__":
    main()
