"""Exact money arithmetic.

Money is a non-negative :class:`fractions.Fraction`. Calibrated thresholds may
also take the value :data:`INF` before an agent has ever bid.
"""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from numbers import Rational
from typing import Union

Money = Fraction
ExtendedMoney = Union[Fraction, float]
MoneyLike = Union[int, str, Fraction, Decimal, float]

INF = math.inf

ZERO = Fraction(0)


def money(value: MoneyLike) -> Fraction:
    """Convert ``value`` to exact non-negative money.

    Floats go through their shortest decimal repr, so ``money(0.1)`` is
    exactly 1/10 rather than the nearest binary fraction.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a money amount")
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"money must be finite, got {value!r}")
        result = Fraction(repr(value))
    elif isinstance(value, (Rational, Decimal, str)):
        result = Fraction(value)
    else:
        raise TypeError(f"cannot interpret {type(value).__name__} as money")
    if result < 0:
        raise ValueError(f"money must be non-negative, got {result}")
    return result


def floor_div(numerator: Fraction, denominator: Fraction) -> int:
    """Exact ``floor(numerator / denominator)``."""
    return math.floor(Fraction(numerator) / Fraction(denominator))


def ceil_div(numerator: Fraction, denominator: Fraction) -> int:
    return math.ceil(Fraction(numerator) / Fraction(denominator))


def format_money(value: ExtendedMoney) -> str:
    """Render money for CSV and reports.

    Integers print bare, terminating fractions print as decimals, anything
    else falls back to ``p/q``. The output is deterministic.
    """
    if value == INF:
        return "inf"
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = value * 10**digits
    text = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    sign = "-" if value < 0 else ""
    return f"{sign}{text[:-digits]}.{text[-digits:]}"
