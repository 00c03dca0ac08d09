"""Truncated expansion of exp(sum_j c_j u^j / j) in exact rational arithmetic.

A weight sequence (c_k)_{k>=1} determines two coefficient sequences via

    sum_k a_k u^k = sum_k b_k u^k / k! = exp( sum_j c_j u^j / j ),

with the whole computation truncated at a chosen order K.  Everything here
is a pure function over Fractions; nothing is ever evaluated at a numeric u.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .errors import InvalidInputError
from .rationals import RationalLike, as_fraction, fractions_from

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class WeightSeq:
    """Finite prefix (c_1..c_K) of a nonnegative weight sequence.

    Indices beyond the stored prefix read as zero (finite support); c_0 is
    never stored and reads as the constant 1 wherever an operation needs it.
    """

    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) < 1:
            raise InvalidInputError("WeightSeq needs at least c_1")
        for i, v in enumerate(self.entries, start=1):
            if not isinstance(v, Fraction):
                raise InvalidInputError(f"c_{i} must be a Fraction")
            if v < 0:
                raise InvalidInputError(f"c_{i} = {v} is negative")

    @classmethod
    def from_values(cls, values: Iterable[RationalLike]) -> "WeightSeq":
        return cls(fractions_from(values))

    @property
    def K(self) -> int:
        return len(self.entries)

    def get(self, k: int) -> Fraction:
        """c_k for k >= 1, zero-extended beyond the stored prefix."""
        if k < 1:
            raise InvalidInputError(f"weight index must be >= 1, got {k}")
        if k <= len(self.entries):
            return self.entries[k - 1]
        return ZERO


@dataclass(frozen=True)
class CoeffPair:
    """Truncated output sequences a_0..a_K and b_0..b_K with b_k = k! a_k."""

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.a) != len(self.b) or not self.a:
            raise InvalidInputError("a and b must be nonempty and equally long")
        if self.a[0] != 1 or self.b[0] != 1:
            raise InvalidInputError("a_0 and b_0 must equal 1")

    @property
    def K(self) -> int:
        return len(self.a) - 1


def check_truncation_order(K: int) -> int:
    if not isinstance(K, int) or K < 1:
        raise InvalidInputError(f"truncation order must be a positive integer, got {K!r}")
    return K


def falling_factorial(m: int, k: int) -> int:
    """(m)_k = m(m-1)...(m-k+1); 1 for k = 0, and 0 once a factor hits zero."""
    if m < 0 or k < 0:
        raise InvalidInputError("falling_factorial expects nonnegative integers")
    out = 1
    for i in range(k):
        out *= m - i
        if out == 0:
            return 0
    return out


def expand_a(c: WeightSeq, K: int) -> CoeffPair:
    """Coefficients a_0..a_K of the truncated exponential of sum c_j u^j / j.

    Uses the recursion a_0 = 1, a_n = (1/n) sum_{l=1..n} c_l a_{n-l}.
    """
    check_truncation_order(K)
    a = [ONE]
    for n in range(1, K + 1):
        acc = ZERO
        for l in range(1, n + 1):
            cl = c.get(l)
            if cl:
                acc += cl * a[n - l]
        a.append(acc / n)
    a_t = tuple(a)
    return CoeffPair(a=a_t, b=b_from_a(a_t))


def b_from_a(a: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """b_k = k! * a_k, index 0 up."""
    return tuple(as_fraction(v) * factorial(k) for k, v in enumerate(a))


def a_from_b(b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """a_k = b_k / k!, index 0 up; exact inverse of b_from_a."""
    return tuple(as_fraction(v) / factorial(k) for k, v in enumerate(b))
