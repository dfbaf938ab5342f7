"""Exact integers and rationals.

Naturals are plain Python ``int`` (arbitrary precision, canonical by
construction) and rationals are :class:`fractions.Fraction`, which is always
stored reduced with a positive denominator. The helpers here add the
package's error type and the wire formats used in reports.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from .errors import DivisionByZero

BigNat = int
Rat = Fraction

RatLike = Union[Fraction, int]


def rat(num: RatLike, den: int = 1) -> Fraction:
    if den == 0:
        raise DivisionByZero(f"{num}/0")
    return Fraction(num, den)


def rat_add(a: RatLike, b: RatLike) -> Fraction:
    return Fraction(a) + Fraction(b)


def rat_sub(a: RatLike, b: RatLike) -> Fraction:
    return Fraction(a) - Fraction(b)


def rat_mul(a: RatLike, b: RatLike) -> Fraction:
    return Fraction(a) * Fraction(b)


def rat_div(a: RatLike, b: RatLike) -> Fraction:
    if b == 0:
        raise DivisionByZero(f"division of {a} by zero")
    return Fraction(a) / Fraction(b)


def as_nat(value: int, name: str = "value", minimum: int = 0) -> int:
    """Validate that ``value`` is an int no smaller than ``minimum``."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an int, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def rat_str(q: RatLike) -> str:
    """Render as ``num/den`` (always with a denominator, ``0/1`` for zero)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def rat_to_json(q: RatLike) -> dict:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def rat_from_json(obj: dict) -> Fraction:
    den = int(obj["den"])
    if den <= 0:
        raise ValueError(f"denominator must be positive, got {den}")
    return Fraction(int(obj["num"]), den)


def parse_rat(text: str) -> Fraction:
    """Parse ``"3/5"``, ``"-7"`` or ``"0.25"`` exactly."""
    return Fraction(text.strip())
