"""Regression, normality and rank tests over normalized residual series."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Mapping

import numpy as np
from scipy.stats import rankdata

from .errors import DataIntegrityError, DegenerateSampleError
from .expectation import expected_value
from .field import primes_in_range
from .symmetry import classify_prime

RANK_KEYS = ("abs_value", "abs_deviation", "prime_index")

_NORMAL = NormalDist()


# ---------------------------------------------------------------------------
# distribution functions


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for I_x(a, b) (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    dd = 1.0 - qab * x / qap
    if abs(dd) < tiny:
        dd = tiny
    dd = 1.0 / dd
    h = dd
    for m in range(1, 10_000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        dd = 1.0 + aa * dd
        dd = tiny if abs(dd) < tiny else dd
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        dd = 1.0 / dd
        h *= dd * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        dd = 1.0 + aa * dd
        dd = tiny if abs(dd) < tiny else dd
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        dd = 1.0 / dd
        delta = dd * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def student_t_cdf(t: float, df: float) -> float:
    if math.isinf(t):
        return 1.0 if t > 0 else 0.0
    tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
    return 1.0 - tail if t > 0 else tail


def student_t_ppf(q: float, df: float) -> float:
    """Quantile of Student's t by bisection on the CDF."""
    if not 0.0 < q < 1.0:
        raise ValueError("q must be in (0, 1)")
    if q == 0.5:
        return 0.0
    if q < 0.5:
        return -student_t_ppf(1.0 - q, df)
    lo, hi = 0.0, 1.0
    while student_t_cdf(hi, df) < q:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if student_t_cdf(mid, df) < q:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


# ---------------------------------------------------------------------------
# data containers


@dataclass
class StatReport:
    test: str
    statistic: float
    params: dict = field(default_factory=dict)
    p_value: float | None = None
    region: tuple[float, float] | None = None
    decision: str = "accept"

    def to_dict(self) -> dict:
        def clean(v):
            if isinstance(v, (np.floating, np.integer)):
                v = v.item()
            if isinstance(v, float) and not math.isfinite(v):
                return str(v)
            return v

        return {
            "test": self.test,
            "statistic": clean(self.statistic),
            "params": {k: clean(v) for k, v in self.params.items()},
            "p_value": clean(self.p_value),
            "region": None if self.region is None else [clean(v) for v in self.region],
            "decision": self.decision,
        }


@dataclass(frozen=True)
class ResidualSeries:
    """(C_d - E_d) / d over an increasing list of primes."""

    model: str
    primes: np.ndarray
    residuals: np.ndarray

    def __post_init__(self):
        if len(self.primes) != len(self.residuals):
            raise ValueError("primes and residuals differ in length")
        if np.any(np.diff(self.primes) <= 0):
            raise ValueError("primes must be strictly increasing")
        if not np.all(np.isfinite(self.residuals)):
            raise ValueError("residuals must be finite")

    def __len__(self):
        return len(self.primes)

    @property
    def mean(self) -> float:
        return float(np.mean(self.residuals))


def select_primes(model: str, prime_limit: int) -> list[int]:
    primes = primes_in_range(2, prime_limit)
    if model == "random":
        return primes
    if model not in ("star", "double_star"):
        raise ValueError(f"unknown model {model!r}")
    return [d for d in primes if classify_prime(d).tag == model]


def residual_series(
    model: str,
    complexities: Mapping[int, int],
    prime_limit: int = 2531,
    reference: Mapping[int, int] | None = None,
) -> ResidualSeries:
    """Residual series for ``model`` from a prime -> C_d mapping.

    If ``reference`` is given, every prime present in both mappings must agree.
    """
    if reference is not None:
        for d in sorted(set(complexities) & set(reference)):
            if complexities[d] != reference[d]:
                raise DataIntegrityError(d, reference[d], complexities[d])
    primes = select_primes(model, prime_limit)
    missing = [d for d in primes if d not in complexities]
    if missing:
        raise KeyError(f"no complexity for d={missing[0]}")
    res = np.array([(complexities[d] - expected_value(d, model)) / d for d in primes])
    return ResidualSeries(model, np.array(primes, dtype=np.int64), res)


# ---------------------------------------------------------------------------
# tests


def ols_slope_test(series: ResidualSeries, alpha: float = 0.05) -> StatReport:
    x = np.asarray(series.primes, dtype=float)
    y = np.asarray(series.residuals, dtype=float)
    n = len(x)
    if n < 3:
        raise DegenerateSampleError("regression needs at least 3 points")
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    if sxx == 0:
        raise DegenerateSampleError("all x values are equal")
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    sse = float(np.sum(resid**2))
    df = n - 2
    crit = student_t_ppf(1 - alpha / 2, df)
    infinite_t = sse <= 1e-24 * max(1.0, float(np.sum((y - ym) ** 2)))
    if infinite_t:
        se = 0.0
        t = 0.0 if slope == 0 else math.copysign(math.inf, slope)
        p = 1.0 if slope == 0 else 0.0
    else:
        se = math.sqrt(sse / df / sxx)
        t = slope / se
        p = 2 * (1 - student_t_cdf(abs(t), df))
    return StatReport(
        "ols_slope_t",
        t,
        {
            "slope": slope,
            "intercept": intercept,
            "se_slope": se,
            "sse": sse,
            "df": df,
            "n": n,
            "infinite_t": infinite_t,
        },
        p,
        (-crit, crit),
        "accept" if -crit <= t <= crit else "reject",
    )


# Royston (1995) AS R94 polynomial coefficients
_C1 = (0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056)
_C2 = (0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633)
_C3 = (0.5440, -0.39978, 0.025054, -6.714e-4)
_C4 = (1.3822, -0.77857, 0.062767, -0.0020322)
_C5 = (-1.5861, -0.31082, -0.083751, 0.0038915)
_C6 = (-0.4803, -0.082676, 0.0030302)
_G = (-2.273, 0.459)


def _poly(coef, x):
    return sum(c * x**i for i, c in enumerate(coef))


def shapiro_wilk_coefficients(n: int) -> np.ndarray:
    """Approximate weights a_1..a_n (antisymmetric, a_n > 0)."""
    if n == 3:
        return np.array([-math.sqrt(0.5), 0.0, math.sqrt(0.5)])
    m = np.array([_NORMAL.inv_cdf((i - 0.375) / (n + 0.25)) for i in range(1, n + 1)])
    mm = float(m @ m)
    u = 1 / math.sqrt(n)
    a = np.empty(n)
    an = _poly(_C1, u) + m[-1] / math.sqrt(mm)
    if n > 5:
        an1 = _poly(_C2, u) + m[-2] / math.sqrt(mm)
        phi = (mm - 2 * m[-1] ** 2 - 2 * m[-2] ** 2) / (1 - 2 * an**2 - 2 * an1**2)
        a[:] = m / math.sqrt(phi)
        a[-1], a[-2], a[0], a[1] = an, an1, -an, -an1
    else:
        phi = (mm - 2 * m[-1] ** 2) / (1 - 2 * an**2)
        a[:] = m / math.sqrt(phi)
        a[-1], a[0] = an, -an
    return a


def shapiro_wilk(values, alpha: float = 0.05) -> StatReport:
    x = np.sort(np.asarray(values, dtype=float))
    n = len(x)
    if not 3 <= n <= 5000:
        raise DegenerateSampleError(f"Shapiro-Wilk supports 3 <= n <= 5000, got {n}")
    ss = float(np.sum((x - x.mean()) ** 2))
    if ss == 0 or x[-1] - x[0] < 1e-12 * max(1.0, abs(x[0])):
        raise DegenerateSampleError("all values are identical")
    a = shapiro_wilk_coefficients(n)
    w = min(1.0, float(a @ x) ** 2 / ss)
    if n == 3:
        p = max(0.0, 6 / math.pi * (math.asin(math.sqrt(w)) - math.asin(math.sqrt(0.75))))
    elif n <= 11:
        gamma = _poly(_G, n)
        y = -math.log(gamma - math.log1p(-w)) if w < 1 else math.inf
        mu, sigma = _poly(_C3, n), math.exp(_poly(_C4, n))
        p = 1 - normal_cdf((y - mu) / sigma)
    else:
        ln_n = math.log(n)
        y = math.log1p(-w) if w < 1 else -math.inf
        mu, sigma = _poly(_C5, ln_n), math.exp(_poly(_C6, ln_n))
        p = 1 - normal_cdf((y - mu) / sigma)
    return StatReport(
        "shapiro_wilk", w, {"n": n}, p, (alpha, 1.0), "accept" if p >= alpha else "reject"
    )


def rank_sum_z(keys, in_group) -> tuple[float, float]:
    """Midrank sum of the flagged group and its normal-approximation z."""
    keys = np.asarray(keys, dtype=float)
    in_group = np.asarray(in_group, dtype=bool)
    n = len(keys)
    n1 = int(in_group.sum())
    n2 = n - n1
    if n1 == 0 or n2 == 0:
        raise DegenerateSampleError("both groups must be non-empty")
    ranks = rankdata(keys, method="average")
    r1 = float(ranks[in_group].sum())
    z = (r1 - n1 * (n + 1) / 2) / math.sqrt(n1 * n2 * (n + 1) / 12)
    return r1, z


def mann_whitney_scatter(
    series: ResidualSeries, lam: float, key: str = "abs_value", z_crit: float = 1.960
) -> StatReport:
    """Are residuals above ``lam`` randomly placed in the ordering given by ``key``?

    ``abs_value`` ranks by |r|, ``abs_deviation`` by |r - lam| and
    ``prime_index`` by position in the prime sequence.
    """
    r = np.asarray(series.residuals, dtype=float)
    above, below = r > lam, r < lam
    keep = above | below
    if key == "abs_value":
        keys = np.abs(r)
    elif key == "abs_deviation":
        keys = np.abs(r - lam)
    elif key == "prime_index":
        keys = np.arange(len(r), dtype=float)
    else:
        raise ValueError(f"unknown rank key {key!r}")
    r1, z = rank_sum_z(keys[keep], above[keep])
    p = 2 * (1 - normal_cdf(abs(z)))
    return StatReport(
        "mann_whitney",
        z,
        {
            "key": key,
            "lambda": lam,
            "rank_sum_above": r1,
            "n_above": int(above.sum()),
            "n_below": int(below.sum()),
        },
        p,
        (-z_crit, z_crit),
        "accept" if abs(z) <= z_crit else "reject",
    )


def histogram(values, bin_width: float, anchor: float = 0.0) -> list[tuple[float, int]]:
    """Counts in bins [anchor + k w, anchor + (k+1) w); empty bins are omitted."""
    if bin_width <= 0:
        raise ValueError("bin_width must be positive")
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return []
    k = np.floor((v - anchor) / bin_width).astype(np.int64)
    ks, counts = np.unique(k, return_counts=True)
    return [(float(anchor + kk * bin_width), int(c)) for kk, c in zip(ks, counts)]
