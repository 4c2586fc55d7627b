import math
import random

import pytest
from hypothesis import given, strategies as st

from unitindex.arith import (
    SIEVE_LIMIT,
    chi_minus1,
    factor,
    is_prime,
    is_squarefree,
    jacobi,
    squarefree_range,
    squarefree_segments,
)


def naive_squarefree(n):
    return all(n % (p * p) for p in range(2, math.isqrt(n) + 1))


def legendre_by_euler(a, p):
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def test_factor_examples():
    one = factor(1)
    assert one.value == 1 and one.primes == () and one.omega == 0
    f = factor(56)
    assert (f.primes, f.exponents) == ((2, 7), (3, 1))
    big = factor(9_999_999_967)
    assert big.primes == (9_999_999_967,)


@given(st.integers(min_value=1, max_value=2**62))
def test_factor_invariants(n):
    f = factor(n)
    f.check()
    assert f.omega == len(f.primes)


def test_factor_semiprime_near_64_bits():
    f = factor((2**31 - 1) * (2**32 + 15))
    assert f.primes == (2**31 - 1, 2**32 + 15)


def test_is_prime_against_trial_division():
    for n in range(10_000):
        assert is_prime(n) == (n > 1 and all(n % d for d in range(2, math.isqrt(n) + 1)))
    # strong pseudoprimes to several small bases
    for n in (3215031751, 2152302898747, 3474749660383, 341550071728321, 3825123056546413051):
        assert not is_prime(n)


@pytest.mark.parametrize("n,expected", [(12, False), (14, True), (1, True)])
def test_is_squarefree_examples(n, expected):
    assert is_squarefree(n) is expected


@pytest.mark.parametrize("a,n,expected", [(2, 7, 1), (2, 3, -1), (5, 1, 1), (3, 9, 0)])
def test_jacobi_examples(a, n, expected):
    assert jacobi(a, n) == expected


@pytest.mark.parametrize("n", [0, -3, 8])
def test_jacobi_rejects_bad_modulus(n):
    with pytest.raises(ValueError):
        jacobi(2, n)


def test_jacobi_matches_euler_criterion_for_primes():
    primes = [p for p in range(3, 400) if is_prime(p)]
    for p in primes:
        for a in range(-20, 3 * p):
            assert jacobi(a, p) == legendre_by_euler(a % p, p)


odd = st.integers(min_value=1, max_value=2**62).map(lambda n: 2 * n + 1)
ints = st.integers(min_value=-(2**62), max_value=2**62)


@given(ints, ints, odd)
def test_jacobi_multiplicative_in_numerator(a, b, n):
    assert jacobi(a, n) * jacobi(b, n) == jacobi(a * b, n)


@given(ints, odd, odd)
def test_jacobi_multiplicative_in_denominator(a, m, n):
    assert jacobi(a, m) * jacobi(a, n) == jacobi(a, m * n)


@given(odd, odd)
def test_quadratic_reciprocity(m, n):
    if math.gcd(m, n) != 1:
        return
    sign = -1 if ((m - 1) // 2) * ((n - 1) // 2) % 2 else 1
    assert jacobi(m, n) * jacobi(n, m) == sign


@given(odd)
def test_supplementary_laws(n):
    assert jacobi(2, n) == (-1) ** ((n * n - 1) // 8 % 2)
    assert chi_minus1(n) == jacobi(-1, n)


@pytest.mark.parametrize("n,expected", [(7, -1), (1, 1), (13, 1)])
def test_chi_minus1_examples(n, expected):
    assert chi_minus1(n) == expected


def test_chi_minus1_rejects_even():
    with pytest.raises(ValueError):
        chi_minus1(4)


def test_squarefree_range_examples():
    assert [f.value for f in squarefree_range(1, 10)] == [1, 2, 3, 5, 6, 7, 10]
    assert list(squarefree_range(48, 50)) == []


def test_squarefree_count_to_a_million():
    # independent count by Moebius inclusion-exclusion over squares
    X = 10**6
    mu = [1] * (math.isqrt(X) + 1)
    for p in range(2, len(mu)):
        if is_prime(p):
            for m in range(p, len(mu), p):
                mu[m] = -mu[m]
            for m in range(p * p, len(mu), p * p):
                mu[m] = 0
    oracle = sum(mu[q] * (X // (q * q)) for q in range(1, len(mu)))
    assert oracle == 607_926
    assert sum(len(s) for s in squarefree_segments(1, X)) == oracle


def test_squarefree_range_matches_filter_on_random_windows():
    rng = random.Random(7)
    for _ in range(40):
        lo = rng.randint(1, 10**5)
        hi = min(10**5, lo + rng.randint(0, 3000))
        seg = rng.choice([17, 256, 4096])
        got = list(squarefree_range(lo, hi, seg))
        assert [f.value for f in got] == [n for n in range(lo, hi + 1) if naive_squarefree(n)]
        for f in got[::50]:
            f.check()
            assert f == factor(f.value)


def test_squarefree_range_full_window():
    got = [f.value for f in squarefree_range(1, 10**5, 1 << 12)]
    assert got == [n for n in range(1, 10**5 + 1) if naive_squarefree(n)]


def test_squarefree_range_rejects_bad_bounds():
    with pytest.raises(ValueError):
        list(squarefree_range(5, 4))
    with pytest.raises(ValueError):
        list(squarefree_range(1, SIEVE_LIMIT + 1))
