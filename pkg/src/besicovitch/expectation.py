"""Expected all-but-simple counts for random and constrained arrangements.

Three models:

* ``random``: one uniformly chosen line per direction,
  A_d = d^2 - d (d+1) (1 - 1/d)^d.
* ``star`` (d = 1 mod 6): three axis lines x=0, y=0, y=x, two more lines
  through the origin, one 3-line set and (d-7)/6 six-line sets.
* ``double_star`` (d = 5 mod 6): axis lines, one 3-line set and (d-5)/6
  six-line sets.

The constrained expectations are computed twice: once by weighting the
per-point simple probabilities with the number of points of each kind, once
from the closed forms written out term by term.  Both paths run in mpmath.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import mpmath

from .errors import ModelMismatchError

MODELS = ("random", "star", "double_star")

_DPS = 40


def _check_model(d: int, model: str) -> int:
    """Number of six-line sets for a compatible (d, model)."""
    if model == "star":
        if d < 7 or d % 6 != 1:
            raise ModelMismatchError(f"star model needs d = 1 mod 6 and d >= 7, got {d}")
        return (d - 7) // 6
    if model == "double_star":
        if d < 5 or d % 6 != 5:
            raise ModelMismatchError(f"double_star model needs d = 5 mod 6 and d >= 5, got {d}")
        return (d - 5) // 6
    raise ModelMismatchError(f"unknown constrained model {model!r}")


def is_compatible(d: int, model: str) -> bool:
    if model == "random":
        return d >= 2
    try:
        _check_model(d, model)
    except ModelMismatchError:
        return False
    return True


def _random_mp(d: int):
    d = mpmath.mpf(d)
    return d * d - d * (d + 1) * (1 - 1 / d) ** d


def expected_random(d: int) -> float:
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    with mpmath.workdps(_DPS):
        return float(_random_mp(d))


def _ratio_six(d):
    # fraction of off-axis points left at multiplicity 0 by one six-line set
    return (d * d - 9 * d + 26) / (d * d - 3 * d + 2)


def _axis_mp(d: int, model: str):
    k = _check_model(d, model)
    d = mpmath.mpf(d)
    return (d - 3) / (d - 1) * ((d - 4) / (d - 1)) ** k


def _offaxis_mp(d: int, model: str):
    k = _check_model(d, model)
    d = mpmath.mpf(d)
    off = d * d - 3 * d + 2
    empty3 = (d * d - 6 * d + 11) / off
    r = _ratio_six(d)
    if model == "star":
        on_pair = 2 / (d - 2) * empty3 * r**k
        on_triple = (d - 4) / (d - 2) * (3 * (d - 3) / off) * r**k
        weight = d * d - 12 * d + 35  # = 6 k * (d - 5), zero at d = 7
        if weight == 0:
            on_six = mpmath.mpf(0)
        else:
            on_six = (d - 4) / (d - 2) * empty3 * (weight / off) * r ** (k - 1)
        return on_pair + on_triple + on_six
    on_triple = 3 * (d - 3) / off * r**k
    weight = d * d - 10 * d + 25  # = 6 k * (d - 5), zero at d = 5
    if weight == 0:
        on_six = mpmath.mpf(0)
    else:
        on_six = empty3 * (weight / off) * r ** (k - 1)
    return on_triple + on_six


def prob_simple_axis(d: int, model: str) -> float:
    """P(point on an axis line, not the origin, is simple)."""
    with mpmath.workdps(_DPS):
        return float(_axis_mp(d, model))


def prob_simple_offaxis(d: int, model: str) -> float:
    """P(point off the three axis lines is simple)."""
    with mpmath.workdps(_DPS):
        return float(_offaxis_mp(d, model))


def _assembled_mp(d: int, model: str):
    dm = mpmath.mpf(d)
    # origin: multiplicity >= 3, never simple
    return dm * dm - ((3 * dm - 3) * _axis_mp(d, model) + (dm * dm - 3 * dm + 2) * _offaxis_mp(d, model))


def _closed_form_mp(d: int, model: str):
    """Closed forms for M*_d and M**_d, written out term by term."""
    _check_model(d, model)
    d = mpmath.mpf(d)
    q = (d - 4) / (d - 1)
    r = (d**2 - 9 * d + 26) / (d**2 - 3 * d + 2)
    if model == "star":
        e = (d - 7) / 6
        t4 = 0
        if d**2 - 12 * d + 35 != 0:
            t4 = (
                (d - 4) * (d**2 - 6 * d + 11) / (d - 2)
                * (d**2 - 12 * d + 35) / (d**2 - 3 * d + 2)
                * r ** ((d - 13) / 6)
            )
        return d**2 - (
            3 * (d - 3) * q**e
            + 2 * (d**2 - 6 * d + 11) / (d - 2) * r**e
            + 3 * (d - 3) * (d - 4) / (d - 2) * r**e
            + t4
        )
    e = (d - 5) / 6
    t3 = 0
    if d**2 - 10 * d + 25 != 0:
        t3 = (d**2 - 6 * d + 11) * (d**2 - 10 * d + 25) / (d**2 - 3 * d + 2) * r ** ((d - 11) / 6)
    return d**2 - (3 * (d - 3) * q**e + 3 * (d - 3) * r**e + t3)


def closed_form_constrained(d: int, model: str) -> float:
    with mpmath.workdps(_DPS):
        return float(_closed_form_mp(d, model))


def asymptotic_main(d: int, model: str) -> float:
    """Quadratic-plus-linear part of the large-d expansion."""
    lead = (1 - 1 / math.e) * d * d
    if model == "random":
        return lead - d / (2 * math.e)
    if model in ("star", "double_star"):
        return lead + (1 / math.e - 3 * math.exp(-0.5)) * d
    raise ModelMismatchError(f"unknown model {model!r}")


@dataclass(frozen=True)
class ExpectationReport:
    d: int
    model: str
    value: float
    asymptotic_main: float
    residual: float

    def to_dict(self) -> dict:
        return asdict(self)


def expected_constrained(d: int, model: str) -> ExpectationReport:
    with mpmath.workdps(_DPS):
        value = _assembled_mp(d, model)
        check = _closed_form_mp(d, model)
        if abs(value - check) > mpmath.mpf(10) ** -20 * abs(check):
            raise ArithmeticError(f"assembled and closed-form values disagree at d={d}")
    value = float(value)
    main = asymptotic_main(d, model)
    return ExpectationReport(d, model, value, main, value - main)


def expectation_report(d: int, model: str) -> ExpectationReport:
    if model == "random":
        value = expected_random(d)
        main = asymptotic_main(d, model)
        return ExpectationReport(d, model, value, main, value - main)
    return expected_constrained(d, model)


def expected_value(d: int, model: str) -> float:
    if model == "random":
        return expected_random(d)
    return expected_constrained(d, model).value


def estimator_c_hat(d: int, lam: float) -> float:
    """A_d + lam * d."""
    return expected_random(d) + lam * d
