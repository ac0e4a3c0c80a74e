import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from littlewood.errors import FactorizationTimeout
from littlewood.factor import factorize, is_prime, small_primes


def test_small_primes():
    assert small_primes(30) == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def test_is_prime_against_sieve():
    ps = set(small_primes(10**4))
    assert all(is_prime(n) == (n in ps) for n in range(10**4))


def test_carmichael_and_large():
    assert not is_prime(561)
    assert is_prime(2**61 - 1)
    assert not is_prime((2**31 - 1) * (2**61 - 1))


@given(st.integers(1, 10**18))
@settings(max_examples=60, deadline=None)
def test_factorize_product(n):
    f = factorize(n)
    assert f.product() == n
    assert all(is_prime(p) for p, _ in f.factors)


def test_semiprime_beyond_trial():
    p, q = 1000003, 998244353
    f = factorize(p * q)
    assert f.factors == ((p, 1), (q, 1))


def test_timeout_partial():
    n = 2**3 * (2**61 - 1) * (2**89 - 1)
    with pytest.raises(FactorizationTimeout) as exc:
        factorize(n * 1000000007 * 1000000009, budget=1)
    assert exc.value.partial[0] == (2, 3)
    assert math.prod(p**e for p, e in exc.value.partial) * exc.value.cofactor <= n * 1000000007 * 1000000009
