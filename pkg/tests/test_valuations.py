"""Factorial valuations against math.factorial big-integer oracles.

The oracle values here were computed once by direct division of the
exact factorial and are frozen; the library must reproduce them without
ever touching a big integer itself.
"""
import math

import numpy as np
import pytest

from omegasum import (
    ValuationQuery,
    build_spf,
    f_ratio,
    generalized_valuation,
    generalized_valuation_sum,
    legendre_valuation,
    omega_prefix_sum,
    prime_valuations,
    primes_upto,
    upsilon,
)


def exponent_in_factorial(n: int, d: int) -> int:
    # oracle: divide the exact factorial by d until it stops dividing
    f = math.factorial(n)
    e = 0
    while f % d == 0:
        f //= d
        e += 1
    return e


def test_legendre_examples():
    assert legendre_valuation(10, 2) == 8
    assert legendre_valuation(9, 3) == 4
    assert legendre_valuation(5, 5) == 1
    assert legendre_valuation(100, 97) == 1
    assert legendre_valuation(64, 2) == 63


def test_legendre_matches_factorial_oracle():
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    for n in range(2, 41):
        for p in primes:
            if p > n:
                break
            assert legendre_valuation(n, p) == exponent_in_factorial(n, p), (n, p)


def test_legendre_refuses_bad_input():
    with pytest.raises(ValueError):
        legendre_valuation(10, 4)  # composite
    with pytest.raises(ValueError):
        legendre_valuation(10, 11)  # exceeds n
    with pytest.raises(ValueError):
        legendre_valuation(1, 2)


def test_prime_valuations_vectorized_matches_scalar():
    for n in (2, 3, 10, 97, 543, 5000):
        ps = primes_upto(n)
        got = prime_valuations(n, ps)
        for p, v in zip(ps.tolist(), got.tolist()):
            assert v == legendre_valuation(n, p), (n, p)


def test_prime_valuations_validates():
    with pytest.raises(ValueError):
        prime_valuations(10, [11])
    assert prime_valuations(10, np.empty(0, dtype=np.int64)).size == 0


def test_upsilon_examples(spf5000):
    assert upsilon(2, spf5000) == 1
    assert upsilon(4, spf5000) == 4
    assert upsilon(10, spf5000) == 15


def test_upsilon_equals_omega_prefix(spf5000):
    # two fully independent routes to the same integer
    for n in range(2, 2001):
        assert upsilon(n, spf5000) == omega_prefix_sum(n), n


def test_upsilon_log_identity(spf5000):
    # sum of v_p log p recovers log n! to rounding
    for n in (50, 500, 5000):
        ps = primes_upto(n)
        vs = prime_valuations(n, ps)
        got = math.fsum(v * math.log(p) for v, p in zip(vs.tolist(), ps.tolist()))
        assert abs(got - math.lgamma(n + 1)) < 1e-10 * math.lgamma(n + 1), n


def test_upsilon_range_checks(spf5000):
    with pytest.raises(ValueError):
        upsilon(1, spf5000)
    with pytest.raises(ValueError):
        upsilon(5001, spf5000)


def test_generalized_examples(spf5000):
    assert generalized_valuation(4, 10, spf5000) == 4
    assert generalized_valuation(6, 10, spf5000) == 4
    assert generalized_valuation(8, 10, spf5000) == 2
    assert generalized_valuation(10, 10, spf5000) == 2
    # prime base reduces to the plain valuation
    assert generalized_valuation(7, 10, spf5000) == legendre_valuation(10, 7)


def test_generalized_matches_bigint_oracle(spf5000):
    for n in range(2, 61):
        for m in range(2, n + 1):
            assert generalized_valuation(m, n, spf5000) == exponent_in_factorial(n, m), (m, n)


def test_generalized_maximality(spf5000):
    # m**e divides n!, m**(e+1) does not
    for n in (17, 40, 60):
        f = math.factorial(n)
        for m in range(2, n + 1):
            e = generalized_valuation(m, n, spf5000)
            assert f % m**e == 0, (m, n)
            assert f % m ** (e + 1) != 0, (m, n)


def test_generalized_monotone_in_n(spf5000):
    for m in (2, 6, 30, 49):
        prev = generalized_valuation(m, m, spf5000)
        for n in range(m + 1, 200):
            cur = generalized_valuation(m, n, spf5000)
            assert cur >= prev, (m, n)
            prev = cur


def test_generalized_refuses_base_one(spf5000):
    with pytest.raises(ValueError) as err:
        generalized_valuation(1, 10, spf5000)
    assert "divides everything" in str(err.value)


def test_generalized_refuses_base_over_n(spf5000):
    with pytest.raises(ValueError):
        generalized_valuation(11, 10, spf5000)


def test_generalized_sum_matches_loop(spf5000):
    for n in (2, 3, 10, 50, 150):
        want = sum(generalized_valuation(m, n, spf5000) for m in range(2, n + 1))
        assert generalized_valuation_sum(n, spf5000) == want, n


def test_f_ratio_small_values(spf5000):
    assert f_ratio(2, spf5000) == 1.0
    assert f_ratio(3, spf5000) == 1.0
    # numerator 5 = v(2)+v(3)+v(4) = 3+1+1, denominator 4
    assert f_ratio(4, spf5000) == 1.25
    assert f_ratio(10, spf5000) == 29 / 15


def test_f_ratio_never_below_one(spf5000):
    for n in range(2, 400):
        assert f_ratio(n, spf5000) >= 1.0, n


def test_f_ratio_cap():
    sieve = build_spf(50)
    with pytest.raises(ValueError) as err:
        f_ratio(30, sieve, max_n=10)
    assert "cap" in str(err.value)


def test_valuation_query_validation():
    q = ValuationQuery(n=10, base=6)
    assert (q.n, q.base) == (10, 6)
    with pytest.raises(ValueError):
        ValuationQuery(n=10, base=1)
    with pytest.raises(ValueError):
        ValuationQuery(n=10, base=11)
    with pytest.raises(ValueError):
        ValuationQuery(n=1, base=1)
