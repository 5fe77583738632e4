"""Sparse multivariate polynomials with rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence


@dataclass(frozen=True)
class Poly:
    nvars: int
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]

    @classmethod
    def from_dict(cls, nvars: int, d: Mapping[tuple[int, ...], Fraction]) -> "Poly":
        items = tuple(sorted((tuple(k), Fraction(v)) for k, v in d.items() if v))
        return cls(nvars, items)

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls.from_dict(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls.from_dict(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Poly":
        n = len(coeffs)
        return cls.from_dict(n, {tuple(int(i == j) for j in range(n)): Fraction(c) for i, c in enumerate(coeffs)})

    def as_dict(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        d = self.as_dict()
        for k, v in other.terms:
            d[k] = d.get(k, 0) + v
        return Poly.from_dict(self.nvars, d)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        d: dict = {}
        for ka, va in self.terms:
            for kb, vb in other.terms:
                k = tuple(x + y for x, y in zip(ka, kb))
                d[k] = d.get(k, 0) + va * vb
        return Poly.from_dict(self.nvars, d)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degrees(self) -> set[int]:
        return {sum(k) for k, _ in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        return max(self.degrees(), default=0)

    def __call__(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        pt = [Fraction(x) for x in point]
        for k, v in self.terms:
            term = v
            for x, e in zip(pt, k):
                if e:
                    term *= x**e
                    if not term:
                        break
            total += term
        return total

    def abs_coefficient_sum(self) -> Fraction:
        return sum((abs(v) for _, v in self.terms), Fraction(0))

    def primitive_integer(self) -> "Poly":
        """Scale by a positive rational to integer coefficients with content 1."""
        if not self.terms:
            return self
        den = lcm(*(v.denominator for _, v in self.terms))
        ints = [int(v * den) for _, v in self.terms]
        g = 0
        for x in ints:
            g = gcd(g, x)
        return Poly(self.nvars, tuple((k, Fraction(x // g)) for (k, _), x in zip(self.terms, ints)))

    def has_integer_coefficients(self) -> bool:
        return all(v.denominator == 1 for _, v in self.terms)

    def scaled(self, c) -> "Poly":
        c = Fraction(c)
        return Poly.from_dict(self.nvars, {k: v * c for k, v in self.terms})

    def to_json(self) -> list[dict]:
        return [{"exps": list(k), "coef": f"{v.numerator}/{v.denominator}"} for k, v in self.terms]

    @classmethod
    def from_json(cls, nvars: int, terms: list[dict]) -> "Poly":
        d: dict = {}
        for t in terms:
            exps = tuple(int(e) for e in t["exps"])
            if len(exps) != nvars:
                raise ValueError(f"monomial {exps} has {len(exps)} exponents, expected {nvars}")
            d[exps] = d.get(exps, 0) + Fraction(t["coef"])
        return cls.from_dict(nvars, d)
