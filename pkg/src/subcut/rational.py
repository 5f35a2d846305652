"""Exact extended costs: rationals together with positive infinity.

All cost arithmetic in this package is exact.  A cost is either a
``fractions.Fraction`` (always in canonical reduced form) or the singleton
``INF``.  Infinity behaves as the absorbing top element: adding anything to it
gives infinity, it compares greater than every finite cost, and scaling it by
a positive rational leaves it unchanged.  Scaling infinity by zero is
undefined and raises.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union


class Infinity:
    """Singleton positive-infinity cost."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return isinstance(other, Infinity)

    def __hash__(self):
        return hash("subcut-infinity")

    def __lt__(self, other):
        if isinstance(other, Infinity):
            return False
        if isinstance(other, (Fraction, int)):
            return False
        return NotImplemented

    def __le__(self, other):
        return isinstance(other, Infinity)

    def __gt__(self, other):
        if isinstance(other, Infinity):
            return False
        if isinstance(other, (Fraction, int)):
            return True
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, (Infinity, Fraction, int)):
            return True
        return NotImplemented


INF = Infinity()

Cost = Union[Fraction, Infinity]


def is_finite(c: Cost) -> bool:
    return not isinstance(c, Infinity)


def cost_add(a: Cost, b: Cost) -> Cost:
    if isinstance(a, Infinity) or isinstance(b, Infinity):
        return INF
    return a + b


def cost_sum(items: Iterable[Cost]) -> Cost:
    total: Cost = Fraction(0)
    for c in items:
        total = cost_add(total, c)
    return total


def cost_scale(c: Cost, w: Fraction) -> Cost:
    """Scale a cost by a nonnegative rational.  ``0 * INF`` is an error."""
    if isinstance(c, Infinity):
        if w == 0:
            raise ValueError("cannot multiply infinity by zero")
        if w < 0:
            raise ValueError("cannot multiply infinity by a negative weight")
        return INF
    return c * w


def cost_min(a: Cost, b: Cost) -> Cost:
    return b if b < a else a


def parse_fraction(value) -> Fraction:
    """Parse a finite rational from an int, a string 'p/q', or a decimal string."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        if text.lower() in ("inf", "+inf", "infinity"):
            raise ValueError("expected a finite rational, got infinity")
        return Fraction(text)
    if isinstance(value, float):
        if value != int(value):
            raise ValueError(f"refusing inexact float coefficient {value!r}")
        return Fraction(int(value))
    raise ValueError(f"not a rational: {value!r}")


def parse_cost(value) -> Cost:
    """Parse an extended cost; the string 'inf' denotes positive infinity."""
    if isinstance(value, Infinity):
        return INF
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity"):
        return INF
    return parse_fraction(value)


def format_fraction(f: Fraction):
    """Render a rational for JSON: bare int when integral, else 'p/q'."""
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


def format_cost(c: Cost):
    if isinstance(c, Infinity):
        return "inf"
    return format_fraction(c)
