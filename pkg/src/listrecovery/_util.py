from __future__ import annotations

import re
from fractions import Fraction

_RATIONAL = re.compile(r"^\s*-?\d+\s*(/\s*\d+\s*)?$")


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, 'a/b' string, or float (via its repr)."""
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    """Strict 'num/den' (or integer) parser; decimals are rejected."""
    if not _RATIONAL.match(text):
        raise ValueError(f"expected an exact rational 'num/den', got {text!r}")
    return Fraction(text.replace(" ", ""))


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"
