import math
import random

import gmpy2
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fewdigits.arithmetic import (
    COMPLETE,
    PARTIAL,
    FactorEffort,
    PrimeSet,
    SFactorization,
    factorize,
    first_primes,
    greatest_prime_factor,
    is_prime,
    is_smooth,
    primes_up_to,
    radical,
    s_part,
    valuation,
)
from oracles import gpf_and_radical, spf_sieve, trial_factor

FIRST_TEN = first_primes(10)


def test_valuation_examples():
    assert valuation(48, 2) == 4
    assert valuation(1, 7) == 0
    assert valuation(1049601, 3) == 1
    with pytest.raises(ValueError):
        valuation(0, 2)
    with pytest.raises(ValueError):
        valuation(12, 4)


def test_s_part_examples():
    f = s_part(25, {3, 5})
    assert (f.exponents, f.cofactor, f.s_part) == ((0, 2), 1, 25)
    f = s_part(7, {3, 5})
    assert (f.exponents, f.cofactor, f.s_part) == ((0, 0), 7, 1)
    f = s_part(1049601, {3, 7})
    assert (f.s_part, f.cofactor) == (21, 49981)


def test_prime_set_validation():
    assert PrimeSet.of("5,3").primes == (3, 5)
    with pytest.raises(ValueError):
        PrimeSet.of([4])
    with pytest.raises(ValueError):
        PrimeSet.of([])


def test_primes_match_sieve():
    spf = spf_sieve(10**5)
    sieve_primes = [n for n in range(2, 10**5 + 1) if spf[n] == n]
    assert list(primes_up_to(10**5)) == sieve_primes
    assert all(is_prime(p) for p in sieve_primes[-100:])
    assert not any(is_prime(n) for n in range(2, 10**4) if spf[n] != n)


def test_is_prime_large_known_values():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_gpf_and_radical_examples():
    assert greatest_prime_factor(97) == (97, COMPLETE)
    assert greatest_prime_factor(1049601) == (331, COMPLETE)
    assert radical(48) == (6, COMPLETE)
    assert radical(25) == (5, COMPLETE)
    assert radical(1049601) == (1049601, COMPLETE)


def test_partial_status_on_hard_semiprime():
    p = int(gmpy2.next_prime(10**59))
    q = int(gmpy2.next_prime(p))
    tiny = FactorEffort(trial_ceiling=100)
    gp, status = greatest_prime_factor(p * q * 6, tiny)
    assert status == PARTIAL
    assert gp == 3
    q_rad, status = radical(p * q * 12, tiny)
    assert status == PARTIAL
    assert q_rad % 6 == 0


def test_factorize_with_second_stage():
    p, q = 1000003, 999983
    factors, rest = factorize(p * q * 8, FactorEffort(trial_ceiling=100, second_stage=True))
    assert rest == 1
    assert factors == {2: 3, p: 1, q: 1}


def test_gpf_radical_match_vector_oracle():
    limit = 10**5
    gpf, rad = gpf_and_radical(limit)
    for n in range(2, limit + 1):
        assert greatest_prime_factor(n) == (gpf[n], COMPLETE)
        assert radical(n) == (rad[n], COMPLETE)


def test_smooth_examples():
    assert is_smooth(81, 3) is True
    assert is_smooth(97, 89) is False
    assert is_smooth(1049601, 331) is True
    assert is_smooth(1049601, 330) is False


def test_smooth_unknown_when_effort_runs_out():
    n = (10**12 + 39) * (10**12 + 61)  # both prime
    assert is_smooth(n, 10**13, FactorEffort(trial_ceiling=1000)) is None


@given(st.integers(min_value=2, max_value=10**5), st.integers(min_value=2, max_value=400))
def test_smooth_matches_trial_division(n, bound):
    assert is_smooth(n, bound) == (max(trial_factor(n)) <= bound)


def test_s_part_identities_random():
    rng = random.Random(20240531)
    for _ in range(2000):
        n = rng.randint(1, 10**12)
        n2 = rng.randint(1, 10**12)
        S = rng.sample(FIRST_TEN, rng.randint(1, 10))
        f = s_part(n, S)
        assert f.s_part * f.cofactor == n
        assert all(f.cofactor % q for q in S)
        assert s_part(n * n2, S).s_part == f.s_part * s_part(n2, S).s_part


@given(st.integers(min_value=1, max_value=10**40), st.sets(st.sampled_from(FIRST_TEN), min_size=1))
def test_s_factorization_round_trip(n, S):
    f = s_part(n, S)
    assert SFactorization.from_dict(f.to_dict()) == f
    assert f.is_s_unit == (f.cofactor == 1)
    expected = math.prod(q**e for q, e in trial_factor(n).items() if q in S) if n < 10**12 else f.s_part
    assert f.s_part == expected
