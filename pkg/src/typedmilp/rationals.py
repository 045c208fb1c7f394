"""Helpers for exact rational data: JSON encoding and decimal text.

Model data is held as :class:`fractions.Fraction` everywhere (always in
lowest terms, denominator > 0, exact arithmetic). Interchange formats use
``{"num": p, "den": q}`` objects; the LP/MPS emitters additionally need
exact terminating decimal text.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from .errors import ToolkitError

#: Significant-digit budget for decimal emission (LP/MPS).
MAX_SIGNIFICANT_DIGITS = 15


def rat(value: Any) -> Fraction:
    """Coerce an int, string like ``"3/4"``, or Fraction to a Fraction.

    Floats are rejected: the model core is float-free by contract.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ToolkitError("BadParams", "booleans are not rational values")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise ToolkitError("BadParams", f"not an exact rational: {value!r}")


def to_json(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator}


def from_json(obj: Any) -> Fraction:
    """Parse a rational from its JSON form ({"num","den"} or bare int)."""
    if isinstance(obj, bool):
        raise ToolkitError("MalformedDocument", "booleans are not rationals")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, dict) and set(obj) == {"num", "den"}:
        num, den = obj["num"], obj["den"]
        if not isinstance(num, int) or not isinstance(den, int) or isinstance(num, bool) or isinstance(den, bool):
            raise ToolkitError("MalformedDocument", f"non-integer rational parts: {obj!r}")
        if den <= 0:
            raise ToolkitError("MalformedDocument", f"rational denominator must be positive: {obj!r}")
        return Fraction(num, den)
    raise ToolkitError("MalformedDocument", f"not a rational value: {obj!r}")


def is_decimal(value: Fraction, max_digits: int = MAX_SIGNIFICANT_DIGITS) -> bool:
    """True iff the value has a terminating decimal expansion within budget."""
    try:
        decimal_str(value, max_digits)
        return True
    except ToolkitError:
        return False


def decimal_str(value: Fraction, max_digits: int = MAX_SIGNIFICANT_DIGITS) -> str:
    """Exact decimal text for a fraction, e.g. 5 -> "5", -3/4 -> "-0.75".

    Raises ``NonDecimalCoefficient`` when the denominator has a prime
    factor other than 2 or 5, or the expansion needs more than
    ``max_digits`` significant digits.
    """
    num, den = value.numerator, value.denominator
    if den == 1:
        text = str(num)
    else:
        twos = 0
        d = den
        while d % 2 == 0:
            d //= 2
            twos += 1
        fives = 0
        while d % 5 == 0:
            d //= 5
            fives += 1
        if d != 1:
            raise ToolkitError(
                "NonDecimalCoefficient",
                f"{num}/{den} has no terminating decimal expansion",
            )
        shift = max(twos, fives)
        scaled = abs(num) * 10**shift // den
        digits = str(scaled).rjust(shift + 1, "0")
        sign = "-" if num < 0 else ""
        text = f"{sign}{digits[:-shift]}.{digits[-shift:]}".rstrip("0").rstrip(".")
    digits = text.lstrip("-").replace(".", "").lstrip("0").rstrip("0")
    significant = len(digits) or 1
    if significant > max_digits:
        raise ToolkitError(
            "NonDecimalCoefficient",
            f"{num}/{den} needs more than {max_digits} significant digits",
        )
    return text


def parse_decimal(text: str) -> Fraction:
    """Inverse of :func:`decimal_str`; also accepts plain integers."""
    return Fraction(text)
