import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from besicovitch.errors import ModelMismatchError
from besicovitch.expectation import (
    asymptotic_main,
    closed_form_constrained,
    estimator_c_hat,
    expectation_report,
    expected_constrained,
    expected_random,
    expected_value,
    is_compatible,
    prob_simple_axis,
    prob_simple_offaxis,
)

from conftest import trial_division_is_prime


# exact rational oracles, written directly from the probability model
def random_exact(d):
    return F(d * d) - d * (d + 1) * F(d - 1, d) ** d


def star_exact(d):
    k = (d - 7) // 6
    off = d * d - 3 * d + 2
    r = F(d * d - 9 * d + 26, off)
    e3 = F(d * d - 6 * d + 11, off)
    axis = F(d - 3, d - 1) * F(d - 4, d - 1) ** k
    offp = F(2, d - 2) * e3 * r**k + F(d - 4, d - 2) * F(3 * (d - 3), off) * r**k
    if k:
        offp += F(d - 4, d - 2) * e3 * F(d * d - 12 * d + 35, off) * r ** (k - 1)
    return axis, offp


def dstar_exact(d):
    k = (d - 5) // 6
    off = d * d - 3 * d + 2
    r = F(d * d - 9 * d + 26, off)
    e3 = F(d * d - 6 * d + 11, off)
    axis = F(d - 3, d - 1) * F(d - 4, d - 1) ** k
    offp = F(3 * (d - 3), off) * r**k
    if k:
        offp += e3 * F(d * d - 10 * d + 25, off) * r ** (k - 1)
    return axis, offp


def m_exact(d, model):
    axis, offp = (star_exact if model == "star" else dstar_exact)(d)
    return d * d - (3 * (d - 1) * axis + (d * d - 3 * d + 2) * offp)


STAR = [d for d in range(7, 102) if d % 6 == 1 and trial_division_is_prime(d)]
DSTAR = [d for d in range(5, 102) if d % 6 == 5 and trial_division_is_prime(d)]


def test_a7_exact():
    exact = F(49) - F(56 * 279936, 823543)
    assert random_exact(7) == exact
    assert expected_random(7) == pytest.approx(float(exact), rel=1e-15)
    assert expected_random(7) == pytest.approx(29.9645, abs=1e-3)


def test_a2():
    assert expected_random(2) == 2.5


@pytest.mark.parametrize("d", range(2, 102))
def test_random_matches_fraction(d):
    assert expected_random(d) == pytest.approx(float(random_exact(d)), rel=1e-14)


def test_random_large_limit():
    d = 10007
    assert abs(expected_random(d) / d**2 - (1 - 1 / math.e)) < 1e-3


@pytest.mark.parametrize(
    "d, model, value",
    [(7, "star", 2 / 3), (11, "double_star", 0.56), (13, "star", 0.625)],
)
def test_axis_examples(d, model, value):
    assert prob_simple_axis(d, model) == pytest.approx(value, rel=1e-14)


def test_offaxis_examples():
    assert prob_simple_offaxis(7, "star") == pytest.approx(0.48, rel=1e-14)
    assert prob_simple_offaxis(11, "double_star") == pytest.approx(24 / 90 * 48 / 90 + 66 / 90 * 36 / 90, rel=1e-14)
    assert prob_simple_offaxis(11, "double_star") == pytest.approx(0.435555, abs=1e-6)


def test_constrained_examples():
    assert expected_value(7, "star") == pytest.approx(22.6, rel=1e-14)
    assert expected_value(11, "double_star") == pytest.approx(65.0, rel=1e-14)


@pytest.mark.parametrize("d", STAR)
def test_star_matches_fraction(d):
    axis, offp = star_exact(d)
    assert prob_simple_axis(d, "star") == pytest.approx(float(axis), rel=1e-14)
    assert prob_simple_offaxis(d, "star") == pytest.approx(float(offp), rel=1e-14)
    assert expected_value(d, "star") == pytest.approx(float(m_exact(d, "star")), rel=1e-14)
    assert closed_form_constrained(d, "star") == pytest.approx(float(m_exact(d, "star")), rel=1e-14)


@pytest.mark.parametrize("d", DSTAR)
def test_dstar_matches_fraction(d):
    axis, offp = dstar_exact(d)
    assert prob_simple_axis(d, "double_star") == pytest.approx(float(axis), rel=1e-14)
    assert prob_simple_offaxis(d, "double_star") == pytest.approx(float(offp), rel=1e-14)
    assert expected_value(d, "double_star") == pytest.approx(float(m_exact(d, "double_star")), rel=1e-14)


@given(st.sampled_from(STAR + DSTAR))
def test_probabilities_in_unit_interval(d):
    model = "star" if d % 6 == 1 else "double_star"
    assert 0 <= prob_simple_axis(d, model) <= 1
    assert 0 <= prob_simple_offaxis(d, model) <= 1


@pytest.mark.parametrize("d, model", [(11, "star"), (7, "double_star"), (5, "star"), (13, "double_star"), (7, "bogus")])
def test_model_mismatch(d, model):
    with pytest.raises(ModelMismatchError):
        expected_constrained(d, model)
    assert not is_compatible(d, model)


def test_compatibility():
    assert is_compatible(7, "star") and is_compatible(5, "double_star") and is_compatible(2, "random")


@pytest.mark.parametrize("model", ["random", "star", "double_star"])
def test_asymptotic_residual_bounded(model):
    ds = {"random": [101, 1009, 3001], "star": [103, 1009, 3001], "double_star": [101, 1013, 2999]}[model]
    for d in ds:
        rep = expectation_report(d, model)
        assert abs(rep.residual) < 10
        assert rep.to_dict()["model"] == model


def test_asymptotic_unknown_model():
    with pytest.raises(ModelMismatchError):
        asymptotic_main(7, "nope")


def test_estimator():
    assert estimator_c_hat(7, 0) == expected_random(7)
    assert estimator_c_hat(7, -0.856) == pytest.approx(float(random_exact(7)) - 0.856 * 7, rel=1e-14)
    assert estimator_c_hat(7, -0.856) == pytest.approx(23.9725, abs=2e-3)


def test_estimator_near_last_table_entry(table):
    d = 2531
    assert abs(table[d] - estimator_c_hat(d, -0.856)) < 5 * d
