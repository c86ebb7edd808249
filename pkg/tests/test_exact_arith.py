from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given

from modules.core.exact_arith import (find_odd_t, floor_log2, format_rational,
                                      lemma_t_candidates, odd_chain, parse_rational, v2)
from modules.utils.errors import DomainError

odd_naturals = st.integers(min_value=0, max_value=2**19 - 1).map(lambda n: 2 * n + 1)
nonzero_rationals = st.fractions().filter(lambda w: w != 0)


@pytest.mark.parametrize("value, expected", [
    (8, 3),
    (Fraction(-1, 6), -1),
    (Fraction(12, 40), -1),
    (Fraction(-1, 8), -3),
    (7, 0),
])
def test_v2_examples(value, expected):
    assert v2(value) == expected


def test_v2_of_zero():
    with pytest.raises(DomainError):
        v2(0)


@given(nonzero_rationals, nonzero_rationals)
def test_v2_of_sum_is_the_smaller_valuation(w1, w2):
    if v2(w1) > v2(w2):
        assert v2(w1 + w2) == v2(w2)


@given(nonzero_rationals, nonzero_rationals)
def test_v2_is_additive_on_products(w1, w2):
    assert v2(w1 * w2) == v2(w1) + v2(w2)


@pytest.mark.parametrize("K, ks, exps, l", [
    (1, (1,), (), 0),
    (9, (9, 1), (3,), 3),
    (13, (13, 3, 1), (2, 1), 3),
    (47, (47, 23, 11, 5, 1), (1, 1, 1, 2), 5),
])
def test_odd_chain_examples(K, ks, exps, l):
    chain = odd_chain(K)
    assert chain.ks == ks
    assert chain.exps == exps
    assert chain.l == l
    assert chain.r == len(exps)


@pytest.mark.parametrize("K", [0, 4, -3])
def test_odd_chain_rejects_even_or_nonpositive(K):
    with pytest.raises(DomainError):
        odd_chain(K)


@given(odd_naturals)
def test_odd_chain_length_is_floor_log2(K):
    chain = odd_chain(K)
    assert chain.l == floor_log2(K)
    for previous, current, a in zip(chain.ks, chain.ks[1:], chain.exps):
        assert a >= 1
        assert previous == (current << a) + 1


@pytest.mark.parametrize("r, s, a, expected", [
    (1, 3, 2, 3),
    (3, 5, 4, 5),
    (5, 7, 3, None),
])
def test_find_odd_t_examples(r, s, a, expected):
    assert find_odd_t(r, s, a) == expected


@pytest.mark.parametrize("r, s, a", [(3, 3, 2), (5, 3, 2), (2, 5, 3), (1, 3, 0)])
def test_find_odd_t_rejects_bad_arguments(r, s, a):
    with pytest.raises(DomainError):
        find_odd_t(r, s, a)


@given(st.integers(min_value=0, max_value=50), st.integers(min_value=1, max_value=50),
       st.integers(min_value=1, max_value=16))
def test_find_odd_t_is_smallest_in_window(half_r, gap, a):
    r = 2 * half_r + 1
    s = r + 2 * gap
    t = find_odd_t(r, s, a)
    power = 1 << a
    brute = next((c for c in range(1, power // r + 1, 2) if r * c < power < s * c), None)
    assert t == brute
    if t is not None:
        assert floor_log2(r * t) <= a - 1 < a <= floor_log2(s * t)


@given(st.integers(min_value=0, max_value=50), st.integers(min_value=1, max_value=50),
       st.integers(min_value=1, max_value=30))
def test_lemma_candidates_satisfy_window(half_r, gap, a):
    r = 2 * half_r + 1
    s = r + 2 * gap
    for t in lemma_t_candidates(r, s, a):
        assert t % 2 == 1
        assert r * t < (1 << a) < s * t


def test_rational_text_format():
    assert format_rational(1) == "1/1"
    assert format_rational(Fraction(-2, 6)) == "-1/3"
    assert parse_rational(" -2/6 ") == Fraction(-1, 3)
    with pytest.raises(DomainError):
        parse_rational("1/0")
    with pytest.raises(DomainError):
        parse_rational("abc")


@pytest.mark.slow
def test_chain_length_is_floor_log2_for_all_odd_up_to_2_20():
    for K in range(1, 2**20 + 1, 2):
        assert odd_chain(K).l == floor_log2(K), K
