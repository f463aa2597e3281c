"""Exact rational arithmetic used throughout the solver.

gmpy2's mpq is an order of magnitude faster than fractions.Fraction in the
simplex inner loops; fall back to Fraction when gmpy2 is unavailable.
"""
from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    Rat = Fraction

ZERO = Rat(0)
ONE = Rat(1)


def as_rat(value) -> "Rat":
    """Coerce ints, Fractions, mpqs and 'p/q' strings to the working type."""
    if isinstance(value, str):
        return Rat(Fraction(value))
    return Rat(value)


def rat_floor(q) -> int:
    return q.numerator // q.denominator


def rat_ceil(q) -> int:
    return -((-q.numerator) // q.denominator)


def frac_part(q) -> "Rat":
    """Fractional part in [0, 1)."""
    return q - rat_floor(q)
