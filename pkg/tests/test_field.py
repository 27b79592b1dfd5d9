import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from besicovitch.errors import NotPrimeError, UnsupportedModulusError
from besicovitch.field import (
    PrimeField,
    cube_roots_of_unity,
    eval_p,
    fermat_poly,
    is_prime,
    primes_in_range,
)

from conftest import trial_division_is_prime

SMALL_PRIMES = [d for d in range(2, 201) if trial_division_is_prime(d)]


def p_oracle(d, a):
    # exact big-integer evaluation
    num = (a + 1) ** d - a**d - 1
    assert num % d == 0
    return num // d % d


@pytest.mark.parametrize(
    "d, a, expected",
    [(7, 0, 0), (7, 2, 0), (7, 1, 4), (1093, 1, 0), (3, 1, 2), (3, 2, 0)],
)
def test_eval_p_examples(d, a, expected):
    assert eval_p(d, a) == expected


def test_integer_oracle_small_values():
    assert (3**7 - 2**7 - 1) // 7 == 294
    assert (2**7 - 1 - 1) // 7 % 7 == 4


@pytest.mark.parametrize("d", SMALL_PRIMES)
def test_eval_p_matches_big_integer_oracle(d):
    fp = fermat_poly(d)
    for a in range(d):
        assert eval_p(d, a) == p_oracle(d, a) == fp(a)


@given(st.sampled_from(SMALL_PRIMES))
def test_p_vanishes_at_zero_and_minus_one(d):
    assert eval_p(d, 0) == 0
    if d % 2:
        assert eval_p(d, d - 1) == 0


@given(st.integers(min_value=5, max_value=3000).filter(trial_division_is_prime), st.data())
@settings(max_examples=60)
def test_memoized_table_equals_single_evaluation(d, data):
    a = data.draw(st.integers(min_value=0, max_value=d - 1))
    fp = fermat_poly(d)
    assert 0 <= fp(a) < d
    assert fp(a) == eval_p(d, a)


def test_large_modulus_uses_python_pow_path():
    d = 65537
    fp = fermat_poly(d)
    for a in (0, 1, 2, 12345, d - 1):
        assert fp(a) == eval_p(d, a)


def test_wieferich_prime():
    assert pow(2, 1092, 1093**2) == 1
    assert eval_p(1093, 1) == 0
    assert eval_p(1093, 1093 - 2) == 0


def test_non_prime_rejected():
    with pytest.raises(NotPrimeError):
        eval_p(9, 1)
    with pytest.raises(NotPrimeError):
        PrimeField(15)
    with pytest.raises(NotPrimeError):
        fermat_poly(1)


def test_element_out_of_range():
    with pytest.raises(ValueError):
        eval_p(7, 7)


def test_is_prime_against_trial_division():
    assert [n for n in range(3000) if is_prime(n)] == [n for n in range(3000) if trial_division_is_prime(n)]
    assert is_prime(2**61 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2,3,5,7


def test_primes_in_range():
    assert primes_in_range(2, 2531)[-1] == 2531
    assert len(primes_in_range(2, 2531)) == 370
    assert primes_in_range(8, 10) == []


def _cube_roots_brute(d):
    return tuple(x for x in range(2, d) if pow(x, 3, d) == 1)


@pytest.mark.parametrize("d, expected", [(7, (2, 4)), (11, None), (13, (3, 9))])
def test_cube_roots_examples(d, expected):
    assert cube_roots_of_unity(d) == expected


@pytest.mark.parametrize("d", [d for d in SMALL_PRIMES if d >= 5])
def test_cube_roots_exhaustive(d):
    brute = _cube_roots_brute(d)
    got = cube_roots_of_unity(d)
    assert (got or ()) == brute


def test_cube_roots_small_modulus():
    with pytest.raises(UnsupportedModulusError):
        cube_roots_of_unity(3)


def test_prime_field_ops():
    f = PrimeField(7)
    assert f(-1) == 6
    assert f.mul(3, 5) == 1
    assert f.inv(3) == 5
    assert f.div(1, 3) == 5
    assert f.sub(2, 5) == 4
    assert f.neg(0) == 0
    with pytest.raises(ZeroDivisionError):
        f.inv(0)
