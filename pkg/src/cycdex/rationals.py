"""Exact rationals and the shared "p/q" string format.

Every sequence exchanged through JSON or the CLI is a list of strings in
canonical lowest terms with positive denominator ("3/2", "-1/3", "7").
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InvalidInputError

RationalLike = Union[Fraction, int, str]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce an int, "p/q" string, or Fraction to Fraction. Floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInputError(f"not a rational: {value!r}") from exc
    raise InvalidInputError(f"exact rational required, got {type(value).__name__}")


def format_rational(x: Fraction) -> str:
    """Canonical "p/q" (or bare integer) string for a Fraction."""
    return str(x)


def parse_rational_list(text: str) -> tuple[Fraction, ...]:
    """Parse a comma-separated list of "p/q" tokens."""
    items = [tok for tok in (t.strip() for t in text.split(",")) if tok]
    if not items:
        raise InvalidInputError("empty rational list")
    return tuple(as_fraction(tok) for tok in items)


def fractions_from(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(as_fraction(v) for v in values)


def rationals_to_strings(values: Sequence[Fraction]) -> list[str]:
    return [format_rational(v) for v in values]
