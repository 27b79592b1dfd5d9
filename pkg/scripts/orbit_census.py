"""Orbit profiles, prime tags and incidence checks over a prime range.

Usage: python scripts/orbit_census.py [--lo 5] [--hi 400]
"""

import argparse
from collections import Counter

from besicovitch.arrangement import build_pv_arrangement
from besicovitch.field import primes_in_range
from besicovitch.symmetry import classify_prime, orbit_partition, verify_propositions


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lo", type=int, default=5)
    ap.add_argument("--hi", type=int, default=400)
    args = ap.parse_args()

    tags = Counter()
    for d in primes_in_range(max(args.lo, 5), args.hi):
        arr = build_pv_arrangement(d)
        prof = Counter(orbit_partition(arr).profile())
        cls = classify_prime(d)
        tags[cls.tag] += 1
        props = verify_propositions(arr).all_true if d >= 11 else None
        print(f"{d:>5} d%6={d % 6}  orbits {dict(sorted(prof.items()))}  {cls.tag:<11} props={props}")
        if cls.offending_orbits:
            print(f"      {cls.justification}")
    print(dict(tags))


if __name__ == "__main__":
    main()
