"""Decimal text and JSON forms of exact rationals."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from typedmilp.errors import ToolkitError
from typedmilp.rationals import decimal_str, from_json, parse_decimal, to_json


class TestDecimalStr:
    @pytest.mark.parametrize("value,expected", [
        (Fraction(5), "5"),
        (Fraction(-3), "-3"),
        (Fraction(1, 2), "0.5"),
        (Fraction(-3, 4), "-0.75"),
        (Fraction(1, 10), "0.1"),
        (Fraction(7, 25), "0.28"),
        (Fraction(0), "0"),
        (Fraction(1, 2**10), "0.0009765625"),
    ])
    def test_exact_text(self, value, expected):
        assert decimal_str(value) == expected

    @pytest.mark.parametrize("value", [Fraction(1, 3), Fraction(2, 7), Fraction(5, 6)])
    def test_non_terminating_rejected(self, value):
        with pytest.raises(ToolkitError) as err:
            decimal_str(value)
        assert err.value.code == "NonDecimalCoefficient"

    def test_significant_digit_budget(self):
        with pytest.raises(ToolkitError):
            decimal_str(Fraction(1, 2**60))
        assert decimal_str(Fraction(10**20)) == str(10**20)  # zeros are free

    @given(st.fractions(max_denominator=10**6))
    def test_round_trip_when_terminating(self, value):
        try:
            text = decimal_str(value)
        except ToolkitError:
            return
        assert parse_decimal(text) == value


class TestJsonForm:
    def test_shape(self):
        assert to_json(Fraction(-3, 4)) == {"num": -3, "den": 4}
        assert from_json({"num": -3, "den": 4}) == Fraction(-3, 4)
        assert from_json(7) == 7

    @pytest.mark.parametrize("bad", [
        {"num": 1}, {"num": 1, "den": 0}, {"num": 1, "den": -2},
        {"num": 0.5, "den": 1}, "3/4", True, None, [1, 2],
    ])
    def test_malformed_rejected(self, bad):
        with pytest.raises(ToolkitError):
            from_json(bad)
