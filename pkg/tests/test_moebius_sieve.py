import numpy as np
import pytest

from modules.core.moebius_sieve import (MoebiusSieve, _linear_sieve_kernel, _prime_count_bound,
                                        _slicing_sieve, squarefree_count)
from modules.utils.errors import CapacityError, DomainError, SequenceRangeError


def mobius_by_trial_division(n):
    if n == 0:
        return 0
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


ORACLE = np.array([mobius_by_trial_division(n) for n in range(10**4 + 1)], dtype=np.int8)


@pytest.mark.parametrize("n, expected", [(1, 1), (2, -1), (4, 0), (6, 1), (12, 0), (30, -1)])
def test_known_values(mu_small, n, expected):
    assert mu_small[n] == expected


def test_mu_zero_is_zero(mu_small):
    assert mu_small[0] == 0


def test_sieve_matches_trial_division(sieve):
    table = sieve.build(10**4)
    assert np.array_equal(table.values, ORACLE)


def test_slicing_sieve_matches_trial_division():
    assert np.array_equal(_slicing_sieve(10**4), ORACLE)


def test_python_linear_kernel_matches_trial_division():
    limit = 2000
    mu = np.zeros(limit + 1, dtype=np.int8)
    composite = np.zeros(limit + 1, dtype=np.bool_)
    primes = np.zeros(_prime_count_bound(limit), dtype=np.int64)
    count = _linear_sieve_kernel(limit, mu, composite, primes)
    assert count == 303
    assert np.array_equal(mu, ORACLE[:limit + 1])


@pytest.mark.parametrize("N, expected", [(1, 1), (10, 7), (100, 61)])
def test_squarefree_count(mu_small, N, expected):
    assert squarefree_count(N, mu_small) == expected
    assert mu_small.squarefree_count(N) == expected


def test_mertens(mu_small):
    assert mu_small.mertens(10) == -1
    assert mu_small.mertens(100) == 1


def test_table_is_read_only(mu_small):
    with pytest.raises(ValueError):
        mu_small.values[1] = 0


def test_cached_table_is_truncated():
    sieve = MoebiusSieve(capacity=1000)
    big = sieve.build(1000)
    small = sieve.build(10)
    assert small.limit == 10
    assert len(small) == 11
    assert np.array_equal(small.values, big.values[:11])


def test_out_of_range_access(mu_small):
    small = mu_small.truncated(50)
    with pytest.raises(SequenceRangeError):
        small[51]
    with pytest.raises(SequenceRangeError):
        small.require(51)
    with pytest.raises(SequenceRangeError):
        small.window(0, 52)


def test_domain_and_capacity_errors():
    sieve = MoebiusSieve(capacity=100)
    with pytest.raises(DomainError):
        sieve.build(0)
    with pytest.raises(CapacityError):
        sieve.build(101)
