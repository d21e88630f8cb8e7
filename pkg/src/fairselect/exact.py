"""Exact rational helpers.

Scores are snapped to a decimal grid at ingestion, so every quantity the
solvers compare (scores, dual-line coefficients, event times) is a rational
number with a known denominator. Floats entering through the API are read by
their printed decimal value, which for grid-snapped data recovers the grid
rational exactly.
"""

from decimal import Decimal
from fractions import Fraction

from .errors import ParameterError


def to_fraction(x) -> Fraction:
    """Convert a number to an exact Fraction.

    Floats are interpreted by their shortest decimal representation (the
    value you see when printing them), not their binary expansion; for
    grid-snapped values the two coincide.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise ParameterError(f"non-finite value: {x!r}")
        return Fraction(Decimal(repr(x)))
    if isinstance(x, (str, Decimal)):
        return Fraction(Decimal(x))
    raise ParameterError(f"cannot interpret {x!r} as a rational")


def snap(x, decimals: int) -> Fraction:
    """Round ``x`` to the nearest multiple of 10**-decimals, exactly."""
    scale = 10**decimals
    return Fraction(round(to_fraction(x) * scale), scale)


def snap_float(x, decimals: int) -> float:
    """Float representative of ``snap(x, decimals)``."""
    return float(snap(x, decimals))


def is_on_grid(x: float, decimals: int, tol: float = 1e-3) -> bool:
    """True when the float is (up to binary dust) a grid multiple."""
    scaled = x * (10**decimals)
    return abs(scaled - round(scaled)) <= tol


def fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
