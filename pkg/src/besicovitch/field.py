"""Prime-field arithmetic and the Fermat-quotient polynomial.

Elements of F_d are plain Python ints in ``range(d)``.  The polynomial

    p(a) = ((a + 1)^d - a^d - 1) / d   (mod d)

is evaluated with modular exponentiation modulo d^2 so no large powers are
ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ArithmeticInvariantError, NotPrimeError, UnsupportedModulusError

# Deterministic Miller-Rabin witnesses, valid for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    r, s = n - 1, 0
    while r % 2 == 0:
        r //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, r, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes d with lo <= d <= hi, by a simple sieve."""
    if hi < 2 or hi < lo:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, int(hi**0.5) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return [int(v) for v in np.flatnonzero(sieve) if v >= lo]


def require_prime(d: int) -> int:
    if not isinstance(d, (int, np.integer)) or not is_prime(int(d)):
        raise NotPrimeError(f"modulus must be prime, got {d!r}")
    return int(d)


@dataclass(frozen=True)
class PrimeField:
    """The field F_d with least-non-negative-residue representation."""

    d: int

    def __post_init__(self):
        require_prime(self.d)

    def __call__(self, v: int) -> int:
        return v % self.d

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.d

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.d

    def mul(self, a: int, b: int) -> int:
        return a * b % self.d

    def neg(self, a: int) -> int:
        return -a % self.d

    def inv(self, a: int) -> int:
        if a % self.d == 0:
            raise ZeroDivisionError("0 has no inverse in F_d")
        return pow(a, -1, self.d)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.d

    def elements(self) -> range:
        return range(self.d)


def eval_p(d: int, a: int) -> int:
    """Fermat-quotient polynomial p(a) over F_d."""
    d = require_prime(d)
    if not 0 <= a < d:
        raise ValueError(f"element {a} not in [0, {d})")
    return _eval_p_unchecked(d, a)


def _eval_p_unchecked(d: int, a: int) -> int:
    m = d * d
    num = (pow(a + 1, d, m) - pow(a, d, m) - 1) % m
    if num % d:
        raise ArithmeticInvariantError(
            f"(a+1)^d - a^d - 1 not divisible by d (d={d}, a={a})"
        )
    return num // d % d


@dataclass(frozen=True)
class FermatPoly:
    """All values of p over F_d, computed once."""

    d: int
    values: np.ndarray = field(repr=False, compare=False)

    def __call__(self, a: int) -> int:
        return int(self.values[a])

    def zeros(self) -> list[int]:
        return [int(a) for a in np.flatnonzero(self.values == 0)]


def _powers_mod_square(d: int) -> np.ndarray:
    """a^d mod d^2 for a = 0..d, by vectorised square-and-multiply."""
    m = d * d
    if d >= 1 << 16:
        # products would overflow 64 bits
        return np.array([pow(a, d, m) for a in range(d + 1)], dtype=object)
    base = np.arange(d + 1, dtype=np.uint64)
    acc = np.ones(d + 1, dtype=np.uint64)
    mod = np.uint64(m)
    e = d
    while e:
        if e & 1:
            acc = acc * base % mod
        base = base * base % mod
        e >>= 1
    return acc


@lru_cache(maxsize=1024)
def fermat_poly(d: int) -> FermatPoly:
    d = require_prime(d)
    m = d * d
    pw = _powers_mod_square(d).astype(object)
    num = (pw[1:] - pw[:-1] - 1) % m
    if any(v % d for v in num):
        raise ArithmeticInvariantError(f"(a+1)^d - a^d - 1 not divisible by d for some a (d={d})")
    vals = np.array([v // d for v in num], dtype=np.int64)
    vals.flags.writeable = False
    return FermatPoly(d, vals)


def cube_roots_of_unity(d: int) -> tuple[int, int] | None:
    """The two primitive cube roots of unity (smaller first), or None if d = 2 mod 3."""
    d = require_prime(d)
    if d < 5:
        raise UnsupportedModulusError(f"cube roots of unity need d >= 5, got {d}")
    if d % 3 != 1:
        return None
    # omega = g^((d-1)/3) for any g whose image is not 1
    for g in range(2, d):
        w = pow(g, (d - 1) // 3, d)
        if w != 1:
            return tuple(sorted((w, w * w % d)))
    raise ArithmeticInvariantError(f"no primitive cube root found for d={d}")
