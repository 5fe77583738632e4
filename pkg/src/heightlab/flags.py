"""Dimension, degree and bound constant of flag varieties F(n̄) ⊂ ℙ(E_T).

The degree comes from the Hilbert polynomial of the Plücker-type embedding,
m ↦ dim V(m·λ) with λ = Σ_{i<k} ω_{s_i} (s_i the partial sums), evaluated by
the Weyl dimension formula and interpolated exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate
from math import factorial, prod

from .hermlat import FIELD_DEGREE


class DegreeMismatch(ArithmeticError):
    pass


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if not parts or any(x <= 0 for x in parts):
            raise ValueError(f"partition parts must be positive: {self.parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def partial_sums(self) -> tuple[int, ...]:
        return tuple(accumulate(self.parts))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def compositions(n: int):
    """All ordered partitions (compositions) of n."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            yield (first,) + rest


def flag_dimension(p: Partition) -> int:
    """d = N² − Σ nᵢ·sᵢ."""
    return p.n**2 - sum(ni * si for ni, si in zip(p.parts, p.partial_sums))


def _separations(p: Partition) -> dict[tuple[int, int], int]:
    cuts = p.partial_sums[:-1]
    n = p.n
    return {
        (i, j): sum(1 for s in cuts if i <= s < j)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
    }


def weyl_dim_value(p: Partition, m: int) -> int:
    """dim V(m·λ(n̄)) = ∏_{i<j} (m·c_ij + j − i)/(j − i)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    val = Fraction(1)
    for (i, j), c in _separations(p).items():
        if c:
            val *= Fraction(m * c + j - i, j - i)
    assert val.denominator == 1
    return int(val)


def interpolate(values: list[Fraction]) -> list[Fraction]:
    """Coefficients (low to high) of the polynomial through (k, values[k]), k = 0..len−1."""
    n = len(values)
    # Newton forward differences, then expand the falling-factorial basis
    diffs = [Fraction(v) for v in values]
    newton = []
    for k in range(n):
        newton.append(diffs[0])
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    coeffs = [Fraction(0)] * n
    basis = [Fraction(1)]  # C(m, k) as a polynomial in m
    for k in range(n):
        for i, c in enumerate(basis):
            coeffs[i] += newton[k] * c
        # C(m, k+1) = C(m, k)·(m − k)/(k + 1)
        nxt = [Fraction(0)] * (len(basis) + 1)
        for i, c in enumerate(basis):
            nxt[i + 1] += c / (k + 1)
            nxt[i] -= c * k / (k + 1)
        basis = nxt
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def hilbert_polynomial(p: Partition) -> list[Fraction]:
    d = flag_dimension(p)
    # d + 2 samples: one more than needed, so a wrong d shows up as a degree mismatch
    return interpolate([Fraction(weyl_dim_value(p, m)) for m in range(d + 2)])


def flag_degree(p: Partition) -> int:
    """δ = d!·(leading coefficient of the Hilbert polynomial)."""
    d = flag_dimension(p)
    poly = hilbert_polynomial(p)
    if len(poly) - 1 != d:
        raise DegreeMismatch(f"Hilbert polynomial has degree {len(poly) - 1}, expected {d}")
    delta = poly[-1] * factorial(d)
    assert delta.denominator == 1
    return int(delta)


def constant_A(p: Partition) -> Fraction:
    """A(n̄) = ∏_{i<k}(N − sᵢ)·d·δ / ([K:ℚ]·N).

    The product stops at k−1: the k-th factor N − s_k is always zero.
    """
    n = p.n
    factors = prod(n - s for s in p.partial_sums[:-1])
    return Fraction(factors * flag_dimension(p) * flag_degree(p), FIELD_DEGREE * n)


def constant_A_as_printed(p: Partition) -> Fraction:
    """The product taken over all i = 1..k, which always includes N − s_k = 0."""
    n = p.n
    factors = prod(n - s for s in p.partial_sums)
    return Fraction(factors * flag_dimension(p) * flag_degree(p), FIELD_DEGREE * n)


def grassmannian_degree_as_printed(n: int, p: int) -> Fraction:
    """1!2!⋯(p−1)!·(d−1)! / ((N−p)!(N−p+1)!⋯(N−1)!), d = p(N−p)."""
    d = p * (n - p)
    num = prod(factorial(i) for i in range(1, p)) * factorial(d - 1)
    den = prod(factorial(i) for i in range(n - p, n))
    return Fraction(num, den)


def grassmannian_degree_staircase(n: int, p: int) -> int:
    """d!·∏_{i=0}^{p−1} i!/(N−p+i)!, the same expression with d! in place of (d−1)!."""
    d = p * (n - p)
    val = Fraction(factorial(d)) * prod(Fraction(factorial(i), factorial(n - p + i)) for i in range(p))
    assert val.denominator == 1
    return int(val)


@dataclass(frozen=True)
class FlagRow:
    partition: Partition
    d: int
    delta: int
    a: Fraction
    delta_printed: Fraction | None
    a_printed: Fraction


def flag_table(n: int) -> list[FlagRow]:
    rows = []
    for parts in compositions(n):
        if len(parts) < 2:
            continue
        p = Partition(parts)
        printed = grassmannian_degree_as_printed(n, parts[1]) if len(parts) == 2 else None
        rows.append(FlagRow(p, flag_dimension(p), flag_degree(p), constant_A(p), printed, constant_A_as_printed(p)))
    return rows
