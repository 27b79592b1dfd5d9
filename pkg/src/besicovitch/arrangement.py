"""Lines in F_d^2, minimal Besicovitch arrangements and point multiplicities.

A line is stored as the canonical triple (A, B, C) of ``A x + B y + C = 0``
where the first nonzero of (A, B) is 1.  The grid counter rasterises every
line once (``d`` cells per line), so a full count costs O(d^2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable

import numpy as np

from .errors import GridAllocationError, UnsupportedModulusError
from .field import fermat_poly, require_prime

INF = "inf"
VERTICAL = "vertical"


@dataclass(frozen=True)
class Line:
    d: int
    A: int
    B: int
    C: int

    def __post_init__(self):
        A, B = self.A % self.d, self.B % self.d
        if A == 0 and B == 0:
            raise ValueError("(A, B) must not both vanish")
        s = pow(A if A else B, -1, self.d)
        object.__setattr__(self, "A", A * s % self.d)
        object.__setattr__(self, "B", B * s % self.d)
        object.__setattr__(self, "C", self.C * s % self.d)

    @classmethod
    def normalized(cls, d: int, A: int, B: int, C: int) -> "Line":
        """Same as ``Line(d, A, B, C)`` without the dataclass init overhead."""
        A, B = A % d, B % d
        if A:
            s = pow(A, -1, d)
            A, B = 1, B * s % d
        elif B:
            s = pow(B, -1, d)
            B = 1
        else:
            raise ValueError("(A, B) must not both vanish")
        ln = object.__new__(cls)
        object.__setattr__(ln, "d", d)
        object.__setattr__(ln, "A", A)
        object.__setattr__(ln, "B", B)
        object.__setattr__(ln, "C", C * s % d)
        return ln

    @property
    def is_vertical(self) -> bool:
        return self.B == 0

    @property
    def direction(self) -> int | str:
        """Slope in F_d, or ``VERTICAL``."""
        if self.B == 0:
            return VERTICAL
        return -self.A * pow(self.B, -1, self.d) % self.d

    @property
    def intercept(self) -> int:
        """y-intercept for non-vertical lines, x-intercept for vertical ones."""
        if self.B == 0:
            return -self.C % self.d
        return -self.C * pow(self.B, -1, self.d) % self.d

    @property
    def through_origin(self) -> bool:
        return self.C == 0

    def contains(self, x: int, y: int) -> bool:
        return (self.A * x + self.B * y + self.C) % self.d == 0

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        t = np.arange(self.d, dtype=np.int64)
        if self.is_vertical:
            return np.full(self.d, self.intercept, dtype=np.int64), t
        return t, (self.direction * t + self.intercept) % self.d

    def intersection(self, other: "Line") -> tuple[int, int] | None:
        """Common point of two non-parallel lines, else None."""
        d = self.d
        det = (self.A * other.B - other.A * self.B) % d
        if det == 0:
            return None
        inv = pow(det, -1, d)
        # Cramer on A x + B y = -C
        x = (-self.C * other.B + other.C * self.B) * inv % d
        y = (-self.A * other.C + other.A * self.C) * inv % d
        return x, y

    def __str__(self):
        return f"{self.A}x + {self.B}y + {self.C} = 0 (mod {self.d})"


@dataclass(frozen=True)
class Arrangement:
    """d + 1 lines, one per direction of P^1(F_d)."""

    d: int
    lines: tuple[Line, ...]
    labels: dict[Hashable, int] = field(compare=False)

    def __post_init__(self):
        if len(self.lines) != self.d + 1:
            raise ValueError(f"expected {self.d + 1} lines, got {len(self.lines)}")
        if len({ln.direction for ln in self.lines}) != self.d + 1:
            raise ValueError("directions are not pairwise distinct")
        if any(ln.d != self.d for ln in self.lines):
            raise ValueError("line modulus differs from arrangement modulus")

    def line(self, label) -> Line:
        return self.lines[self.labels[label]]

    def label_of(self) -> dict[Line, Hashable]:
        return {self.lines[i]: lab for lab, i in self.labels.items()}


def pv_label(d: int, a: int) -> int:
    """Label of L_a with a read as an integer mod d (so -1 -> d - 1)."""
    return a % d


def build_pv_arrangement(d: int) -> Arrangement:
    """L_a: a x - (a+1) y - p(a) = 0 for a in F_d, and L_inf: x - y = 0."""
    d = require_prime(d)
    p = fermat_poly(d)
    lines = [Line(d, a, -(a + 1), -p(a)) for a in range(d)]
    lines.append(Line(d, 1, -1, 0))
    labels = {a: a for a in range(d)}
    labels[INF] = d
    return Arrangement(d, tuple(lines), labels)


def arrangement_from_offsets(d: int, offsets: Iterable[int]) -> Arrangement:
    """Lines y = m x + c_m for m in F_d, then x = c_d; labels are the directions."""
    c = [int(v) % d for v in offsets]
    if len(c) != d + 1:
        raise ValueError(f"need {d + 1} offsets, got {len(c)}")
    lines = [Line(d, m, -1, c[m]) for m in range(d)]
    lines.append(Line(d, 1, 0, -c[d]))
    labels = {m: m for m in range(d)}
    labels[VERTICAL] = d
    return Arrangement(d, tuple(lines), labels)


def sample_random_arrangement(d: int, rng_seed: int) -> Arrangement:
    """One uniformly chosen line per direction.

    Offsets come from ``numpy.random.default_rng(rng_seed)`` (PCG64): one draw
    of ``integers(0, d, size=(1, d + 1))``.  Row k of a batch drawn by
    :func:`sample_all_but_simple_counts` with the same seed is the same
    arrangement as this for k = 0.
    """
    d = require_prime(d)
    rng = np.random.default_rng(rng_seed)
    return arrangement_from_offsets(d, rng.integers(0, d, size=(1, d + 1))[0])


@dataclass(frozen=True)
class MultiplicityGrid:
    d: int
    counts: np.ndarray = field(repr=False)  # counts[x, y]
    histogram: dict[int, int]

    @property
    def simple_points(self) -> int:
        return self.histogram.get(1, 0)


def _line_arrays(arr: Arrangement):
    slopes, icepts, verticals = [], [], []
    for ln in arr.lines:
        if ln.is_vertical:
            verticals.append(ln.intercept)
        else:
            slopes.append(ln.direction)
            icepts.append(ln.intercept)
    return slopes, icepts, verticals


def multiplicity_grid(arr: Arrangement) -> MultiplicityGrid:
    d = arr.d
    slopes, icepts, verticals = _line_arrays(arr)
    dtype = np.int32 if d * d < 2**31 else np.int64
    try:
        x = np.arange(d, dtype=dtype)
        s = np.asarray(slopes, dtype=dtype)
        c = np.asarray(icepts, dtype=dtype)
        # (x, line) order keeps each row's bincount targets inside one cache-sized block
        flat = x[:, None] * s[None, :]
        flat += c[None, :]
        flat %= d
        flat += (x * d)[:, None]
        counts = np.bincount(flat.ravel(), minlength=d * d)
        del flat
        for x0 in verticals:
            counts[x0 * d : (x0 + 1) * d] += 1
    except MemoryError as exc:
        raise GridAllocationError(f"cannot allocate multiplicity grid for d={d}") from exc
    counts = counts.astype(np.uint16 if d < 65535 else np.uint32).reshape(d, d)
    counts.flags.writeable = False
    hist = np.bincount(counts.ravel())
    histogram = {int(k): int(v) for k, v in enumerate(hist) if v}
    return MultiplicityGrid(d, counts, histogram)


def all_but_simple_count(grid: MultiplicityGrid) -> int:
    """Points of multiplicity 0 or at least 2."""
    return grid.d * grid.d - grid.simple_points


def complexity(d: int) -> int:
    d = require_prime(d)
    if d == 2:
        raise UnsupportedModulusError(
            "d=2 is refused: the reference table lists C_2=1 but the d=2 "
            "arrangement (y=0, x=1, y=x) has 4 points of multiplicity != 1"
        )
    return all_but_simple_count(multiplicity_grid(build_pv_arrangement(d)))


def brute_force_all_but_simple(arr: Arrangement) -> int:
    """O(d^3) reference count: substitute every point into every line."""
    d = arr.d
    total = 0
    for x in range(d):
        for y in range(d):
            m = sum(1 for ln in arr.lines if (ln.A * x + ln.B * y + ln.C) % d == 0)
            total += m != 1
    return total


def sample_all_but_simple_counts(
    d: int, samples: int, seed: int, chunk: int | None = None
) -> np.ndarray:
    """All-but-simple counts of ``samples`` random minimal arrangements."""
    d = require_prime(d)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    offsets = rng.integers(0, d, size=(samples, d + 1))
    if chunk is None:
        chunk = max(1, 2_000_000 // (d * (d + 1)))
    x = np.arange(d, dtype=np.int64)
    m = np.arange(d, dtype=np.int64)
    tilt = (x[:, None] * m[None, :]) % d  # m*x for every (x, slope)
    out = np.empty(samples, dtype=np.int64)
    for lo in range(0, samples, chunk):
        off = offsets[lo : lo + chunk]
        k = len(off)
        ys = (tilt[None, :, :] + off[:, None, :d]) % d
        flat = ys + x[None, :, None] * d + (np.arange(k) * d * d)[:, None, None]
        counts = np.bincount(flat.ravel(), minlength=k * d * d).reshape(k, d, d)
        counts[np.arange(k), off[:, d], :] += 1
        out[lo : lo + k] = d * d - (counts == 1).sum(axis=(1, 2))
    return out
