"""Time the grid count and track C_d / d^2 against 1 - 1/e.

Usage: python scripts/complexity_scaling.py [--primes 101 1009 2531 5003 10007]
"""

import argparse
import math
import time

from besicovitch.arrangement import complexity
from besicovitch.expectation import expected_random


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--primes", type=int, nargs="+", default=[101, 1009, 2531, 5003, 10007])
    args = ap.parse_args()

    print(f"{'d':>6} {'C_d':>11} {'C_d/d^2':>8} {'(C_d-A_d)/d':>12} {'secs':>7}")
    for d in args.primes:
        t0 = time.perf_counter()
        c = complexity(d)
        dt = time.perf_counter() - t0
        print(f"{d:>6} {c:>11} {c / d**2:>8.5f} {(c - expected_random(d)) / d:>+12.4f} {dt:>7.3f}")
    print(f"1 - 1/e = {1 - 1 / math.e:.5f}")


if __name__ == "__main__":
    main()
