"""Тесты носителей BigCount и LogNumber."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from percolation.errors import InputDomainError
from percolation.numbers import MP, LogNumber, as_probability, log_count

ZERO = LogNumber.zero()


def rel_log_error(value: LogNumber, expected_ln) -> float:
    return float(abs(value.ln - expected_ln) / max(1, abs(expected_ln)))


def test_constructors():
    assert ZERO.is_zero and ZERO.ln is None
    assert LogNumber.one().ln == 0
    assert float(LogNumber.of(Fraction(3, 4))) == pytest.approx(0.75, rel=1e-15)
    assert float(LogNumber.of(np.int64(12))) == pytest.approx(12.0)
    assert float(LogNumber.of(np.float64(0.25))) == pytest.approx(0.25)
    assert LogNumber.of(0).is_zero and LogNumber.of(Fraction(0)).is_zero
    for bad in (-1, -0.5, Fraction(-1, 3), float("nan")):
        with pytest.raises(InputDomainError):
            LogNumber.of(bad)
    with pytest.raises(InputDomainError):
        LogNumber.of("1")


@pytest.mark.parametrize("k,n", [(2, 10 ** 4), (3, 10 ** 4), (16, 10 ** 4), (7, 1)])
def test_big_count_round_trip(k, n):
    value = log_count(k ** n)
    assert rel_log_error(value, n * MP.log(k)) < 1e-12


def test_big_count_rejects_negative():
    with pytest.raises(InputDomainError):
        log_count(-1)
    assert log_count(0).is_zero


def test_huge_values_overflow_to_inf_in_float():
    big = log_count(2 ** 10 ** 4)
    assert float(big) == float("inf")
    assert big.log_float() == pytest.approx(10 ** 4 * math.log(2))
    assert big.log10() == pytest.approx(10 ** 4 * math.log10(2))
    assert float(1 / big) == 0.0
    assert not (1 / big).is_zero


def test_zero_absorbs_products():
    x = LogNumber.of(12345)
    assert (ZERO * x).is_zero
    assert (x * ZERO).is_zero
    assert (x * 0).is_zero
    assert (ZERO * log_count(2 ** 10 ** 4)).is_zero


def test_zero_in_powers_and_division():
    assert ZERO ** 0 == 1
    assert (ZERO ** 3).is_zero
    assert (ZERO ** Fraction(1, 2)).is_zero
    with pytest.raises(ZeroDivisionError):
        ZERO ** -1
    assert (ZERO / LogNumber.of(5)).is_zero
    with pytest.raises(ZeroDivisionError):
        LogNumber.of(5) / ZERO
    with pytest.raises(ZeroDivisionError):
        LogNumber.of(5) / 0
    assert float(LogNumber.of(9) ** Fraction(1, 2)) == pytest.approx(3.0)
    assert float(2 / LogNumber.of(8)) == pytest.approx(0.25)


def test_sum_of_empty_and_zero_inputs():
    assert LogNumber.sum([]).is_zero
    assert LogNumber.sum([ZERO, ZERO]).is_zero
    assert LogNumber.sum([ZERO, LogNumber.of(3)]) == 3
    assert float(LogNumber.sum(LogNumber.of(x) for x in (1, 2, 3))) == pytest.approx(6.0)
    assert (ZERO + ZERO).is_zero
    assert ZERO + LogNumber.of(2) == 2
    assert LogNumber.of(2) + 0 == 2


def test_sum_of_huge_terms():
    terms = [log_count(2 ** 10 ** 4)] * 4
    assert rel_log_error(LogNumber.sum(terms), (10 ** 4 + 2) * MP.log(2)) < 1e-12


@given(st.integers(0, 10 ** 20), st.integers(1, 10 ** 20), st.integers(0, 10 ** 20))
@settings(max_examples=300)
def test_addition_is_monotone(a, delta, c):
    small, large, other = LogNumber.of(a), LogNumber.of(a + delta), LogNumber.of(c)
    assert small < large
    assert small + other <= large + other
    assert LogNumber.sum([small, other]) <= LogNumber.sum([large, other])


@given(st.integers(1, 10 ** 30), st.integers(1, 10 ** 30))
@settings(max_examples=200)
def test_product_matches_integer_product(a, b):
    assert rel_log_error(log_count(a) * log_count(b), MP.log(MP.mpf(a * b))) < 1e-12


def test_ordering_and_equality():
    values = [ZERO, LogNumber.of(Fraction(1, 3)), LogNumber.one(), LogNumber.of(7)]
    assert values == sorted(values)
    assert ZERO == 0 and LogNumber.one() == 1
    assert ZERO < Fraction(1, 10 ** 9)
    assert hash(LogNumber.of(4)) == hash(LogNumber.of(4))


def test_json_form():
    assert ZERO.to_json() == {"ln": None, "value": 0.0}
    doc = LogNumber.of(math.e).to_json()
    assert doc["ln"] == pytest.approx(1.0) and doc["value"] == pytest.approx(math.e)


def test_as_probability():
    assert as_probability(Fraction(1, 2)) == Fraction(1, 2)
    assert as_probability(0).is_zero
    assert as_probability(1) == 1
    with pytest.raises(InputDomainError):
        as_probability(1.5)
    for endpoint in (0, 1):
        with pytest.raises(InputDomainError):
            as_probability(endpoint, open_interval=True)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
