import math

import numpy as np
import pytest
import scipy.special
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from besicovitch.errors import DataIntegrityError, DegenerateSampleError
from besicovitch.stats import (
    ResidualSeries,
    histogram,
    mann_whitney_scatter,
    ols_slope_test,
    rank_sum_z,
    regularized_incomplete_beta,
    residual_series,
    select_primes,
    shapiro_wilk,
    student_t_cdf,
    student_t_ppf,
)


@pytest.mark.parametrize("a, b", [(0.5, 0.5), (2.0, 3.0), (184.0, 0.5), (10.0, 40.0)])
def test_incomplete_beta_against_scipy(a, b):
    for x in np.linspace(0, 1, 41):
        assert regularized_incomplete_beta(a, b, x) == pytest.approx(scipy.special.betainc(a, b, x), abs=1e-12)


@pytest.mark.parametrize("df", [1, 2, 5, 30, 368])
def test_t_cdf_and_ppf_against_scipy(df):
    for t in (-4.0, -1.0, 0.0, 0.5, 2.5):
        assert student_t_cdf(t, df) == pytest.approx(scipy.stats.t.cdf(t, df), abs=1e-12)
    for q in (0.025, 0.5, 0.9, 0.975):
        assert student_t_ppf(q, df) == pytest.approx(scipy.stats.t.ppf(q, df), abs=1e-9)


def test_t_quantile_368():
    assert 1.966 <= student_t_ppf(0.975, 368) <= 1.967


def _series(x, y, model="random"):
    return ResidualSeries(model, np.asarray(x), np.asarray(y, dtype=float))


@given(st.lists(st.floats(-10, 10, allow_nan=False), min_size=5, max_size=40))
@settings(max_examples=60)
def test_ols_matches_numpy_and_residuals_orthogonal(ys):
    x = np.arange(2, 2 + 3 * len(ys), 3)
    y = np.array(ys)
    if np.ptp(y) < 1e-6:
        return
    rep = ols_slope_test(_series(x, y))
    slope, intercept = np.polyfit(x, y, 1)
    assert rep.params["slope"] == pytest.approx(slope, abs=1e-9)
    assert rep.params["intercept"] == pytest.approx(intercept, abs=1e-7)
    resid = y - (rep.params["intercept"] + rep.params["slope"] * x)
    assert abs(resid.sum()) < 1e-7
    assert abs((resid * (x - x.mean())).sum()) < 1e-5 * max(1.0, float(np.abs(x).sum()))
    if not rep.params["infinite_t"]:
        lr = scipy.stats.linregress(x, y)
        assert rep.params["se_slope"] == pytest.approx(lr.stderr, rel=1e-6, abs=1e-12)


def test_ols_perfect_fit():
    x = np.array([2, 3, 5, 7, 11])
    rep = ols_slope_test(_series(x, 2 * x + 1))
    assert rep.params["slope"] == pytest.approx(2.0)
    assert rep.params["sse"] == pytest.approx(0.0, abs=1e-20)
    assert rep.params["infinite_t"]
    assert rep.statistic == math.inf
    assert rep.to_dict()["statistic"] == "inf"


def test_ols_degenerate():
    with pytest.raises(DegenerateSampleError):
        ols_slope_test(_series([2, 3], [0.0, 1.0]))


def test_sw_three_values():
    rep = shapiro_wilk([1, 2, 3])
    assert rep.statistic == pytest.approx(1.0, abs=1e-15)
    assert rep.p_value == pytest.approx(1.0)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 11, 12, 50, 370, 2000])
def test_sw_against_scipy(n):
    rng = np.random.default_rng(n)
    for x in (rng.normal(size=n), rng.exponential(size=n)):
        rep = shapiro_wilk(x)
        ref = scipy.stats.shapiro(x)
        assert rep.statistic == pytest.approx(ref.statistic, abs=1e-6)
        assert rep.p_value == pytest.approx(ref.pvalue, abs=1e-5)


def test_sw_errors():
    with pytest.raises(DegenerateSampleError):
        shapiro_wilk([1.0, 1.0, 1.0, 1.0])
    with pytest.raises(DegenerateSampleError):
        shapiro_wilk([1.0, 2.0])


def test_sw_calibration_on_normal_samples():
    passes = sum(shapiro_wilk(np.random.default_rng(s).normal(size=370)).p_value > 0.05 for s in range(100))
    assert passes >= 90


def test_rank_sum_hand_example():
    r1, z = rank_sum_z([1, 2, 3, 4], [True, True, False, False])
    assert r1 == 3.0
    assert z == pytest.approx((3 - 5) / math.sqrt(5 / 3))
    assert z == pytest.approx(-1.549, abs=1e-3)


@given(
    st.lists(st.integers(0, 20), min_size=2, max_size=60),
    st.data(),
)
def test_rank_sum_matches_u_statistic(keys, data):
    flags = data.draw(st.lists(st.booleans(), min_size=len(keys), max_size=len(keys)))
    n1 = sum(flags)
    if n1 in (0, len(keys)):
        with pytest.raises(DegenerateSampleError):
            rank_sum_z(keys, flags)
        return
    r1, z = rank_sum_z(keys, flags)
    n = len(keys)
    n2 = n - n1
    x = [k for k, f in zip(keys, flags) if f]
    y = [k for k, f in zip(keys, flags) if not f]
    u = scipy.stats.mannwhitneyu(x, y).statistic
    assert r1 - n1 * (n1 + 1) / 2 == pytest.approx(u)
    assert z == pytest.approx((u - n1 * n2 / 2) / math.sqrt(n1 * n2 * (n + 1) / 12))


def test_mann_whitney_keys():
    s = _series([2, 3, 5, 7, 11, 13], [0.1, -0.3, 0.5, -1.0, 2.0, -0.2])
    for key in ("abs_value", "abs_deviation", "prime_index"):
        rep = mann_whitney_scatter(s, 0.0, key)
        assert rep.params["n_above"] == 3 and rep.params["key"] == key
    with pytest.raises(ValueError):
        mann_whitney_scatter(s, 0.0, "bogus")
    with pytest.raises(DegenerateSampleError):
        mann_whitney_scatter(s, 10.0)


def test_histogram_cases():
    assert histogram([], 0.25) == []
    assert histogram([0.1, 0.2, 0.05], 0.25) == [(0.0, 3)]
    assert histogram([-0.6, -0.5, 0.0, 0.26], 0.25) == [(-0.75, 1), (-0.5, 1), (0.0, 1), (0.25, 1)]
    with pytest.raises(ValueError):
        histogram([1.0], 0)


def test_select_primes_counts():
    assert len(select_primes("random", 2531)) == 370
    assert len(select_primes("star", 2531)) == 152
    assert len(select_primes("double_star", 2531)) == 153


def test_select_primes_match_table_tags(tags):
    for model in ("star", "double_star"):
        assert select_primes(model, 2531) == sorted(d for d, t in tags.items() if t == model)


def test_residual_series_means(table):
    rnd = residual_series("random", table)
    assert len(rnd) == 370
    assert rnd.mean == pytest.approx(-0.856, abs=0.002)
    assert residual_series("star", table).primes.size == 152
    assert residual_series("double_star", table).primes.size == 153


def test_residual_series_integrity(table):
    bad = dict(table)
    bad[101] += 1
    with pytest.raises(DataIntegrityError, match="d=101"):
        residual_series("random", bad, reference=table)


def test_residual_series_validation():
    with pytest.raises(ValueError):
        ResidualSeries("random", np.array([3, 2]), np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        ResidualSeries("random", np.array([2, 3]), np.array([0.0, np.nan]))


# published bar heights of the random-model residual histogram, bins of width 0.25 from -5
FIG_RANDOM_BARS = [1, 1, 1, 3, 2, 1, 4, 4, 6, 11, 14, 17, 18, 18, 24, 37, 27, 39, 31, 25, 24, 25, 9, 6, 7, 4, 1, 3, 1, 3, 1, 1, 1]


def test_random_histogram_matches_published_bars(table):
    hist = histogram(residual_series("random", table).residuals, 0.25, 0.0)
    assert [start for start, _ in hist] == [-5 + 0.25 * i for i in range(len(FIG_RANDOM_BARS))]
    assert [c for _, c in hist] == FIG_RANDOM_BARS
    assert max(hist, key=lambda b: b[1]) == (-0.75, 39)
