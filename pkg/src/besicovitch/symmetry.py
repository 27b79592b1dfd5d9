"""The six-element group generated by iota and theta acting on lines.

Points are column vectors; a group element g maps the line with normal row
(A, B) and constant C to the line with normal row (A, B) g^{-1} and the same
constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .arrangement import INF, Arrangement, Line, build_pv_arrangement
from .errors import DegenerateGeometryError, UnsupportedModulusError
from .field import cube_roots_of_unity, fermat_poly, require_prime

GAMMA_NAMES = ("id", "iota", "theta", "theta2", "kappa", "lambda")

# (x, y) -> M @ (x, y)
_MATRICES = {
    "id": ((1, 0), (0, 1)),
    "iota": ((0, 1), (1, 0)),  # (y, x)
    "theta": ((-1, 1), (-1, 0)),  # (y - x, -x)
    "theta2": ((0, -1), (1, -1)),  # (-y, x - y)
    "kappa": ((1, -1), (0, -1)),  # (x - y, -y)
    "lambda": ((-1, 0), (-1, 1)),  # (-x, y - x)
}

Matrix = tuple[tuple[int, int], tuple[int, int]]


def _mat_mul(m: Matrix, n: Matrix, d: int) -> Matrix:
    return tuple(
        tuple(sum(m[i][k] * n[k][j] for k in range(2)) % d for j in range(2)) for i in range(2)
    )


def _mat_inv(m: Matrix, d: int) -> Matrix:
    (a, b), (c, e) = m
    det = (a * e - b * c) % d
    if det == 0:
        raise ValueError("singular matrix")
    s = pow(det, -1, d)
    return ((e * s % d, -b * s % d), (-c * s % d, a * s % d))


@dataclass(frozen=True)
class GammaElement:
    name: str
    d: int
    matrix: Matrix
    inverse: Matrix = field(repr=False, compare=False)

    def __call__(self, x: int, y: int) -> tuple[int, int]:
        (a, b), (c, e) = self.matrix
        return (a * x + b * y) % self.d, (c * x + e * y) % self.d

    def compose(self, other: "GammaElement") -> Matrix:
        """Matrix of self o other."""
        return _mat_mul(self.matrix, other.matrix, self.d)

    def order(self) -> int:
        ident = ((1, 0), (0, 1))
        m, k = self.matrix, 1
        while m != ident:
            m = _mat_mul(m, self.matrix, self.d)
            k += 1
        return k


@lru_cache(maxsize=64)
def gamma_elements(d: int) -> dict[str, GammaElement]:
    d = require_prime(d)
    out = {}
    for name in GAMMA_NAMES:
        m = tuple(tuple(v % d for v in row) for row in _MATRICES[name])
        out[name] = GammaElement(name, d, m, _mat_inv(m, d))
    return out


def apply_gamma(g: GammaElement, line: Line) -> Line:
    if g.d != line.d:
        raise ValueError(f"modulus mismatch: element over F_{g.d}, line over F_{line.d}")
    (p, q), (r, s) = g.inverse
    return Line.normalized(line.d, line.A * p + line.B * r, line.A * q + line.B * s, line.C)


def fixed_points(g: GammaElement) -> list[tuple[int, int]]:
    d = g.d
    x, y = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    (a, b), (c, e) = g.matrix
    mask = ((a * x + b * y) % d == x) & ((c * x + e * y) % d == y)
    return [(int(u), int(v)) for u, v in zip(x[mask], y[mask])]


def _label_key(label):
    return (1, 0) if label == INF else (0, label)


@dataclass(frozen=True)
class Orbit:
    labels: tuple
    through_origin: bool

    @property
    def cardinality(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class OrbitPartition:
    d: int
    orbits: tuple[Orbit, ...]

    def profile(self) -> list[int]:
        return sorted(o.cardinality for o in self.orbits)

    def orbit_of(self, label) -> Orbit:
        for o in self.orbits:
            if label in o.labels:
                return o
        raise KeyError(label)


def _generators(d: int) -> list[GammaElement]:
    g = gamma_elements(d)
    return [g["iota"], g["theta"]]


def _orbit(arr: Arrangement, label, label_of: dict, elems) -> Orbit:
    start = arr.line(label)
    members = {start}
    frontier = [start]
    while frontier:
        ln = frontier.pop()
        for g in elems:
            img = apply_gamma(g, ln)
            if img not in label_of:
                raise ValueError(f"image {img} of a line is not in the arrangement")
            if img not in members:
                members.add(img)
                frontier.append(img)
    labs = tuple(sorted((label_of[m] for m in members), key=_label_key))
    flags = {m.through_origin for m in members}
    if len(flags) != 1:
        raise AssertionError(f"orbit {labs} mixes lines through and off the origin")
    return Orbit(labs, flags.pop())


def orbit_of_label(arr: Arrangement, label) -> Orbit:
    if arr.d < 5:
        raise UnsupportedModulusError(f"orbit structure is only defined for d >= 5, got {arr.d}")
    return _orbit(arr, label, arr.label_of(), _generators(arr.d))


def orbit_partition(arr: Arrangement) -> OrbitPartition:
    d = arr.d
    if d < 5:
        raise UnsupportedModulusError(f"orbit structure is only defined for d >= 5, got {d}")
    elems = _generators(d)
    label_of = arr.label_of()
    seen = set()
    orbits = []
    for label in sorted(arr.labels, key=_label_key):
        if label in seen:
            continue
        orbit = _orbit(arr, label, label_of, elems)
        seen.update(orbit.labels)
        orbits.append(orbit)
    return OrbitPartition(d, tuple(orbits))


@dataclass(frozen=True)
class PrimeClass:
    d: int
    tag: str  # star | double_star | unstarred | small
    offending_orbits: tuple[tuple, ...] = ()

    @property
    def justification(self) -> str:
        if self.tag == "small":
            return "d < 5: no orbit structure"
        if not self.offending_orbits:
            return "every line outside the forced orbits avoids the origin"
        return "lines through the origin in orbit(s) " + ", ".join(
            "{" + ", ".join(map(str, o)) + "}" for o in self.offending_orbits
        )


@lru_cache(maxsize=4096)
def classify_prime(d: int) -> PrimeClass:
    """Star / double-star / unstarred tag from the intercepts of the PV lines."""
    d = require_prime(d)
    if d < 5:
        return PrimeClass(d, "small")
    allowed = {0, d - 1}
    roots = cube_roots_of_unity(d)
    if roots:
        allowed.update(roots)
    bad = [a for a in fermat_poly(d).zeros() if a not in allowed]
    if not bad:
        return PrimeClass(d, "star" if d % 3 == 1 else "double_star")
    arr = build_pv_arrangement(d)
    offending = []
    for a in bad:
        if any(a in o for o in offending):
            continue
        offending.append(orbit_of_label(arr, a).labels)
    return PrimeClass(d, "unstarred", tuple(offending))


# fixed line of each involution, by PV label
def _fixed_line_labels(d: int) -> dict[str, object]:
    return {"iota": INF, "kappa": 0, "lambda": d - 1}


@dataclass
class OrbitVerdict:
    labels: tuple
    p1: bool
    p2: bool
    p3: bool


@dataclass
class PropositionReport:
    d: int
    orbits: list[OrbitVerdict]
    lemma1: bool

    @property
    def all_true(self) -> bool:
        return self.lemma1 and all(o.p1 and o.p2 and o.p3 for o in self.orbits)

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "lemma1": self.lemma1,
            "orbits": [
                {"labels": list(o.labels), "P1": o.p1, "P2": o.p2, "P3": o.p3}
                for o in self.orbits
            ],
        }


def _meet(l1: Line, l2: Line) -> tuple[int, int]:
    pt = l1.intersection(l2)
    if pt is None:
        raise DegenerateGeometryError(f"lines {l1} and {l2} do not meet in one point")
    return pt


def involution_points(arr: Arrangement, labels) -> dict[str, set[tuple[int, int]]]:
    """For iota, kappa, lambda: the points L cap g(L) over orbit lines moved by g."""
    g = gamma_elements(arr.d)
    lines = [arr.line(lab) for lab in labels]
    out = {}
    for name in ("iota", "kappa", "lambda"):
        pts = set()
        for ln in lines:
            img = apply_gamma(g[name], ln)
            if img != ln:
                pts.add(_meet(ln, img))
        out[name] = pts
    return out


def verify_propositions(arr: Arrangement) -> PropositionReport:
    """Check the incidence structure of every orbit that avoids the origin."""
    d = arr.d
    g = gamma_elements(d)
    axes = {name: arr.line(lab) for name, lab in _fixed_line_labels(d).items()}
    verdicts = []
    for orbit in orbit_partition(arr).orbits:
        if orbit.through_origin:
            continue
        lines = [arr.line(lab) for lab in orbit.labels]
        p1 = True
        p2 = True
        axis_pairs = set()
        for name, axis in axes.items():
            pairs = set()
            for ln in lines:
                img = apply_gamma(g[name], ln)
                if img == ln:
                    continue
                pairs.add(frozenset((ln, img)))
                p1 &= axis.contains(*_meet(ln, img))
            pts = {_meet(*tuple(pr)) for pr in pairs}
            p2 &= len(pts) == len(pairs)
            axis_pairs |= pairs
        rest = [pr for pr in combinations(lines, 2) if frozenset(pr) not in axis_pairs]
        rest_pts = [_meet(a, b) for a, b in rest]
        p3 = len(set(rest_pts)) == len(rest_pts) and not any(
            ax.contains(*pt) for pt in rest_pts for ax in axes.values()
        )
        if len(lines) == 6:
            p3 &= len(rest) == 6
        verdicts.append(OrbitVerdict(orbit.labels, p1, p2, p3))
    lemma1 = fixed_points(g["theta"]) == [(0, 0)] if d != 3 else True
    return PropositionReport(d, verdicts, lemma1)
