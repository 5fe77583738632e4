"""Seeded random inputs for the experiment suites and property tests."""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg as la
from .hermlat import HermitianLattice, lattice_new


def rational(rng: random.Random, bound: int = 50, positive: bool = False) -> Fraction:
    num = rng.randint(1, bound) if positive else rng.randint(-bound, bound)
    return Fraction(num, rng.randint(1, bound))


def random_spd_gram(rng: random.Random, n: int, bound: int = 50) -> la.Matrix:
    """Symmetric positive-definite, numerators and denominators <= bound (rejection sampling)."""
    while True:
        g = la.zeros(n)
        for i in range(n):
            g[i][i] = rational(rng, bound, positive=True)
            for j in range(i):
                if rng.random() < 0.8:
                    g[i][j] = g[j][i] = rational(rng, bound)
        if la.is_positive_definite(g):
            return g


def random_lattice(rng: random.Random, n: int, bound: int = 50) -> HermitianLattice:
    return lattice_new(random_spd_gram(rng, n, bound))


def random_unimodular(rng: random.Random, n: int, length: int = 6, bound: int = 3) -> la.Matrix:
    """Product of elementary integer transvections and a sign flip: det ±1."""
    u = la.identity(n)
    for _ in range(length):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            break
        e = la.identity(n)
        e[i][j] = Fraction(rng.randint(-bound, bound))
        u = la.matmul(u, e)
    if rng.random() < 0.5:
        u = [[-x for x in row] if k == 0 else row for k, row in enumerate(u)]
    return u


def random_invertible(rng: random.Random, n: int, bound: int = 5) -> la.Matrix:
    while True:
        g = [[Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(n)] for _ in range(n)]
        if la.det(g) != 0:
            return g


def random_trace_zero(rng: random.Random, n: int, bound: int = 9) -> la.Matrix:
    while True:
        x = [[Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(n)] for _ in range(n)]
        x[n - 1][n - 1] = -sum((x[i][i] for i in range(n - 1)), Fraction(0))
        if any(v for row in x for v in row):
            return x


def random_semistable_trace_zero(rng: random.Random, n: int, bound: int = 9) -> la.Matrix:
    from .semistab import is_nilpotent

    while True:
        x = random_trace_zero(rng, n, bound)
        if not is_nilpotent(x):
            return x


def random_nilpotent(rng: random.Random, n: int, bound: int = 4) -> la.Matrix:
    """A random SL_N(ℤ)-conjugate of a nonzero strictly upper triangular integer matrix."""
    while True:
        x = la.zeros(n)
        for i in range(n):
            for j in range(i + 1, n):
                x[i][j] = Fraction(rng.randint(-bound, bound))
        if any(v for row in x for v in row):
            break
    g = random_unimodular(rng, n, length=4, bound=2)
    return la.matmul(la.matmul(g, x), la.inverse(g))
