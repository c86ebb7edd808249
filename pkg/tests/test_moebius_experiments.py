import math
import random
from fractions import Fraction

import pytest

from modules.core.moebius_experiments import (CylinderFunction, MoebiusExperiments,
                                              default_checkpoints)
from modules.core.sequence_generator import ThueMorseSequence, ThueToeplitzSequence
from modules.core.toeplitz_builder import build_counterexample
from modules.utils.errors import (CapacityError, DomainError, SequenceRangeError,
                                  UnsupportedInputError)


@pytest.fixture(scope="module")
def experiments():
    return MoebiusExperiments()


@pytest.fixture(scope="module")
def counterexample(mu_small):
    return build_counterexample(None, 10**4, mu_small)


def test_tm_orthogonality_first_term(experiments, mu_small):
    assert experiments.tm_orthogonality(1, mu_small) == -1


def test_sign_function_reproduces_tm_orthogonality(experiments, mu_small):
    for N in (10, 997, 5000):
        assert (experiments.weighted_sum(CylinderFunction.sign(0), ThueMorseSequence(), mu_small, N)
                == experiments.tm_orthogonality(N, mu_small))


def test_indicator_matches_brute_force(experiments, mu_small):
    N = 3000
    z = ThueToeplitzSequence().bits(0, N + 10)
    expected = sum(mu_small[k] for k in range(1, N + 1)
                   if "".join(str(b) for b in z[2 + k:5 + k]) == "101")
    f = CylinderFunction.indicator("101", offset=2)
    assert experiments.weighted_sum(f, ThueToeplitzSequence(), mu_small, N) == Fraction(expected, N)


def test_complex_table_matches_brute_force(experiments, mu_small):
    N = 2000
    values = [1j, -1, 0.5, 2 - 1j]
    f = CylinderFunction.from_values(-1, 2, values)
    assert not f.exact
    x = ThueMorseSequence().bits(0, N + 2)
    expected = sum(values[2 * int(x[k - 1]) + int(x[k])] * mu_small[k] for k in range(1, N + 1)) / N
    assert abs(experiments.weighted_sum(f, ThueMorseSequence(), mu_small, N) - expected) < 1e-9


def test_weighted_sum_needs_enough_moebius(experiments, mu_small):
    with pytest.raises(SequenceRangeError):
        experiments.weighted_sum(CylinderFunction.sign(), ThueMorseSequence(),
                                 mu_small.truncated(100), 101)
    with pytest.raises(DomainError):
        experiments.weighted_sum(CylinderFunction.sign(), ThueMorseSequence(), mu_small, 0)


def test_periodic_orthogonality(experiments, mu_small):
    assert experiments.periodic_orthogonality([1], mu_small, 1000) == Fraction(
        mu_small.mertens(1000), 1000)
    N = 999
    alternating = sum((1 if k % 2 else -1) * mu_small[k] for k in range(1, N + 1))
    assert experiments.periodic_orthogonality([1, -1], mu_small, N) == Fraction(alternating, N)


def test_eventually_periodic_prefix(experiments, mu_small):
    N = 500
    prefix = [5, 0, -2]
    pattern = [1, 0, -1]
    b = prefix + [pattern[(k - 4) % 3] for k in range(4, N + 1)]
    expected = sum(b[k - 1] * mu_small[k] for k in range(1, N + 1))
    assert experiments.periodic_orthogonality(pattern, mu_small, N, prefix) == Fraction(expected, N)
    with pytest.raises(DomainError):
        experiments.periodic_orthogonality([], mu_small, N)


def test_row_decomposition_on_thue_toeplitz(experiments, mu_small):
    decomposition = experiments.row_decomposition(
        CylinderFunction.sign(0), ThueToeplitzSequence(), 3, mu_small, 1000)
    assert decomposition.period == 8
    assert decomposition.M == 125
    assert decomposition.c_double == 0
    assert decomposition.hole_rows == [7]
    assert decomposition.identity_ok
    assert decomposition.boundary_ok
    assert decomposition.rows_ok
    assert decomposition.hole_free_rows_periodic


def test_row_decomposition_on_random_cylinders(experiments, mu_small):
    rng = random.Random(20240613)
    for _ in range(20):
        n = rng.randint(1, 8)
        length = rng.randint(1, 4)
        offset = rng.randint(-1, 5)
        values = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(1 << length)]
        f = CylinderFunction.from_values(offset, length, values)
        decomposition = experiments.row_decomposition(f, ThueToeplitzSequence(), n, mu_small, 10**5)
        assert decomposition.identity_ok
        assert decomposition.boundary_ok
        assert decomposition.rows_ok
        assert decomposition.hole_free_rows_periodic
        assert decomposition.hole_free_count >= decomposition.period - length


def test_row_decomposition_rejects(experiments, mu_small):
    with pytest.raises(UnsupportedInputError):
        experiments.row_decomposition(CylinderFunction.sign(), ThueMorseSequence(), 3, mu_small, 1000)
    with pytest.raises(DomainError):
        experiments.row_decomposition(CylinderFunction.sign(), ThueToeplitzSequence(), 3, mu_small, 8)


def test_row_decomposition_checks_skeleton_budget(experiments, mu_small):
    sign, thue = CylinderFunction.sign(), ThueToeplitzSequence()
    with pytest.raises(CapacityError):
        experiments.row_decomposition(sign, thue, 40, mu_small, 1000)
    with pytest.raises(DomainError):
        experiments.row_decomposition(sign, thue, 0, mu_small, 1000)


def test_default_checkpoints():
    assert default_checkpoints(1000) == [10, 100, 1000]
    assert default_checkpoints(1500) == [10, 100, 1000, 1500]
    assert default_checkpoints(7) == [7]
    with pytest.raises(DomainError):
        default_checkpoints(0)


def test_orthogonality_series_values(experiments, mu_small):
    series = experiments.orthogonality_series(None, ThueMorseSequence(), mu_small, [1000, 10, 100])
    assert [point.N for point in series.checkpoints] == [10, 100, 1000]
    for point in series.checkpoints:
        assert point.value == experiments.tm_orthogonality(point.N, mu_small)
    assert len(series.trend) == 2
    assert series.rows()[0]["trend_ok"] is None


def test_orthogonality_series_with_cylinder(experiments, mu_small):
    f = CylinderFunction.indicator("11", offset=0)
    series = experiments.orthogonality_series(f, ThueToeplitzSequence(), mu_small, [100, 1000])
    for point in series.checkpoints:
        assert point.value == experiments.weighted_sum(f, ThueToeplitzSequence(), mu_small, point.N)


@pytest.mark.parametrize("args", [(-2, 1, {}), (0, 0, {}), (0, 17, {}), (0, 2, {"0": 1}),
                                  (0, 1, {"2": 1})])
def test_cylinder_function_rejects(args):
    with pytest.raises(DomainError):
        CylinderFunction(*args)


def test_cylinder_function_partial_flag():
    assert CylinderFunction.indicator("101").partial
    assert not CylinderFunction.sign().partial
    assert CylinderFunction.sign().bound == 1
    with pytest.raises(DomainError):
        CylinderFunction.from_values(0, 2, [1, 2, 3])


def test_counterexample_correlation(experiments, mu_small, counterexample):
    report = experiments.counterexample_correlation(counterexample, mu_small, 10**4)
    assert report.squarefree == mu_small.squarefree_count(10**4)
    assert report.lower_bound == report.squarefree - Fraction(2 * 10**4, 4)
    assert report.lower_bound_ok
    assert report.non_initials < 10**4 / 4
    with pytest.raises(SequenceRangeError):
        experiments.counterexample_correlation(counterexample, mu_small, 10**4 + 1)


def test_inequality_chain(experiments, mu_small, counterexample):
    report = experiments.inequality_chain(counterexample, mu_small, 10**4)
    assert report.holds
    assert report.non_initial_ok
    assert report.first_violation is None
    assert report.ok
    assert [point.N for point in report.checkpoints] == [10, 100, 1000, 10**4]


@pytest.mark.slow
def test_counterexample_at_one_million(experiments, sieve):
    mu = sieve.build(10**6)
    cs = build_counterexample(None, 10**6, mu)
    report = experiments.counterexample_correlation(cs, mu, 10**6)
    assert report.average >= 6 / math.pi**2 - 0.5 - 0.02
    assert abs(experiments.tm_orthogonality(10**6, mu)) < 0.05


@pytest.mark.slow
def test_inequality_chain_up_to_one_million(experiments, sieve):
    mu = sieve.build(10**6)
    cs = build_counterexample(None, 10**6, mu)
    report = experiments.inequality_chain(cs, mu, 10**6)
    assert report.rho == Fraction(1, 4)
    assert report.holds
    assert report.non_initial_ok
    assert report.first_violation is None
    assert report.first_non_initial_violation is None


@pytest.mark.slow
def test_orthogonality_decade_trend(experiments, sieve):
    mu = sieve.build(10**6)
    series = experiments.orthogonality_series(None, ThueMorseSequence(), mu,
                                              [10**4, 10**5, 10**6])
    assert [point.N for point in series.checkpoints] == [10**4, 10**5, 10**6]
    assert series.trend_ok
    assert series.checkpoints[-1].magnitude < 0.05
