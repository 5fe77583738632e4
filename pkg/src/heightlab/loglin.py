"""Exact half-logarithms of positive rationals.

Every height, Arakelov degree and bound constant in this package has the form
``½·ln(q)`` with ``q`` a positive rational.  :class:`LogValue` stores ``q`` and
never rounds; inequalities between integer combinations of such values reduce
to comparing two rational products.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence


class Ordering(Enum):
    LT = -1
    EQ = 0
    GT = 1

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=False)
class LogValue:
    """The real number ½·ln(q)."""

    q: Fraction

    def __post_init__(self):
        q = self.q if isinstance(self.q, Fraction) else Fraction(self.q)
        if q <= 0:
            raise ValueError(f"LogValue needs a positive rational, got {q}")
        object.__setattr__(self, "q", q)

    def __add__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.q * other.q)

    def __sub__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.q / other.q)

    def __neg__(self) -> "LogValue":
        return LogValue(1 / self.q)

    def scale_int(self, n: int) -> "LogValue":
        return LogValue(self.q ** int(n))

    def __rmul__(self, n: int) -> "LogValue":
        if not isinstance(n, int):
            return NotImplemented
        return self.scale_int(n)

    def compare(self, other: "LogValue") -> Ordering:
        return _sign(self.q - other.q)

    def __lt__(self, other: "LogValue") -> bool:
        return self.q < other.q

    def __le__(self, other: "LogValue") -> bool:
        return self.q <= other.q

    def __gt__(self, other: "LogValue") -> bool:
        return self.q > other.q

    def __ge__(self, other: "LogValue") -> bool:
        return self.q >= other.q

    def is_zero(self) -> bool:
        return self.q == 1

    def __float__(self) -> float:
        return float(lv_to_float(self, 20))

    def __str__(self) -> str:
        return f"logv:{self.q.numerator}/{self.q.denominator}"

    def __repr__(self) -> str:
        return f"LogValue({self.q})"

    @classmethod
    def parse(cls, s: str) -> "LogValue":
        if not s.startswith("logv:"):
            raise ValueError(f"not a LogValue string: {s!r}")
        return cls(Fraction(s[len("logv:"):]))


ZERO = LogValue(Fraction(1))


def _sign(x) -> Ordering:
    return Ordering.GT if x > 0 else Ordering.LT if x < 0 else Ordering.EQ


def lv_from_rational(q) -> LogValue:
    """Return ½·ln(q); rejects q <= 0."""
    return LogValue(Fraction(q))


def lv_log(x) -> LogValue:
    """Return ln(x) = ½·ln(x²) for a positive rational x."""
    x = Fraction(x)
    return LogValue(x * x)


def _product(terms: Iterable[tuple[int, LogValue]]) -> Fraction:
    num, den = 1, 1
    for n, a in terms:
        n = int(n)
        if n >= 0:
            num *= a.q.numerator ** n
            den *= a.q.denominator ** n
        else:
            num *= a.q.denominator ** -n
            den *= a.q.numerator ** -n
    return Fraction(num, den)


def lv_affine_compare(
    lhs: Sequence[tuple[int, LogValue]], rhs: Sequence[tuple[int, LogValue]]
) -> Ordering:
    """Order Σ nᵢ·½ln(qᵢ) against Σ mⱼ·½ln(rⱼ) by comparing ∏qᵢ^nᵢ with ∏rⱼ^mⱼ."""
    return _sign(_product(lhs) - _product(rhs))


def lv_combine(terms: Sequence[tuple[int, LogValue]]) -> LogValue:
    """Collapse an integer combination into a single LogValue."""
    return LogValue(_product(terms))


def lv_to_float(a: LogValue, precision: int = 17) -> decimal.Decimal:
    """½·ln(a.q) to ``precision`` significant digits.

    The last digit is best effort: the log is evaluated with eight guard
    digits and then rounded half-even.
    """
    if precision < 1:
        raise ValueError("precision must be positive")
    if a.q == 1:
        return decimal.Decimal(0)
    ctx = decimal.Context(prec=precision + 8)
    num = ctx.ln(decimal.Decimal(a.q.numerator))
    den = ctx.ln(decimal.Decimal(a.q.denominator))
    val = ctx.divide(ctx.subtract(num, den), 2)
    return decimal.Context(prec=precision).plus(val)
