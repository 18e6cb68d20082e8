"""Exact rational helpers. ``fractions.Fraction`` is the rational type."""

from __future__ import annotations

from fractions import Fraction
from typing import Union

RationalLike = Union[Fraction, int, str]


def to_rational(value: RationalLike) -> Fraction:
    """Convert ints, Fractions and ``"num/den"`` strings to a Fraction.

    Floats are rejected: weights must be exact.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not weights")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(value: Fraction) -> str:
    """Serialize as ``"num/den"`` (denominator always present)."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_integer(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator != 1:
        return format_rational(value)
    return str(value.numerator)
