"""Exact dense linear algebra over the rationals.

Matrices are plain lists of rows of :class:`fractions.Fraction`.  Nothing here
touches floating point; the sizes that occur (representations of GL_N with
N <= 4) are small enough that schoolbook algorithms are fine.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import gcd, lcm
from typing import Iterable, Sequence

Matrix = list[list[Fraction]]


class SingularMatrix(ValueError):
    pass


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic; pass a string or Fraction")
    return Fraction(x)


def mat(rows: Iterable[Iterable]) -> Matrix:
    return [[to_fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int | None = None) -> Matrix:
    n = m if n is None else n
    return [[Fraction(0)] * n for _ in range(m)]


def diag(entries: Sequence) -> Matrix:
    n = len(entries)
    out = zeros(n)
    for i, x in enumerate(entries):
        out[i][i] = to_fraction(x)
    return out


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence) -> list[Fraction]:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def vecmat(v: Sequence, a: Matrix) -> list[Fraction]:
    n = len(a[0]) if a else 0
    out = [Fraction(0)] * n
    for x, row in zip(v, a):
        if x:
            for j, y in enumerate(row):
                out[j] += x * y
    return out


def quadratic_form(v: Sequence, a: Matrix) -> Fraction:
    """Return v · a · vᵀ."""
    return sum((x * y for x, y in zip(vecmat(v, a), v)), Fraction(0))


def scale(a: Matrix, c) -> Matrix:
    c = to_fraction(c)
    return [[c * x for x in row] for row in a]


def is_symmetric(a: Matrix) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product, row-major in (row of a, row of b)."""
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


def block_diag(*blocks: Matrix) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n)
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return out


def submatrix(a: Matrix, rows: Sequence[int], cols: Sequence[int]) -> Matrix:
    return [[a[i][j] for j in cols] for i in rows]


def det(a: Matrix) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    m = [row[:] for row in a]
    sign = 1
    result = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        p = m[k][k]
        result *= p
        for i in range(k + 1, n):
            f = m[i][k] / p
            if f:
                ri, rk = m[i], m[k]
                for j in range(k + 1, n):
                    ri[j] -= f * rk[j]
    return sign * result


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    m = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        m[k], m[piv] = m[piv], m[k]
        p = m[k][k]
        m[k] = [x / p for x in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                rk = m[k]
                m[i] = [x - f * y for x, y in zip(m[i], rk)]
    return [row[n:] for row in m]


def leading_minors(a: Matrix) -> list[Fraction]:
    return [det(submatrix(a, range(k), range(k))) for k in range(1, len(a) + 1)]


def first_nonpositive_minor(a: Matrix) -> int | None:
    """Index k (1-based) of the first leading principal minor <= 0, else None.

    Uses a single symmetric elimination: the k-th pivot is the ratio of the
    k-th and (k-1)-th leading minors, so the signs agree with computing each
    minor separately.
    """
    n = len(a)
    m = [row[:] for row in a]
    for k in range(n):
        p = m[k][k]
        if p <= 0:
            return k + 1
        for i in range(k + 1, n):
            f = m[i][k] / p
            if f:
                for j in range(k + 1, n):
                    m[i][j] -= f * m[k][j]
    return None


def is_positive_definite(a: Matrix) -> bool:
    return is_symmetric(a) and first_nonpositive_minor(a) is None


def is_positive_semidefinite(a: Matrix) -> bool:
    """Exact PSD test by symmetric elimination.

    A zero pivot is allowed only when its whole remaining row is zero.
    """
    if not is_symmetric(a):
        return False
    n = len(a)
    m = [row[:] for row in a]
    for k in range(n):
        p = m[k][k]
        if p < 0:
            return False
        if p == 0:
            if any(m[k][j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = m[i][k] / p
            if f:
                for j in range(k + 1, n):
                    m[i][j] -= f * m[k][j]
    return True


def compound(a: Matrix, k: int) -> Matrix:
    """k-th compound matrix: k×k minors indexed by sorted index sets."""
    m, n = shape(a)
    rows = list(combinations(range(m), k))
    cols = list(combinations(range(n), k))
    return [[det(submatrix(a, r, c)) for c in cols] for r in rows]


def permanent(a: Matrix) -> Fraction:
    n = len(a)
    total = Fraction(0)
    for sigma in permutations(range(n)):
        prod = Fraction(1)
        for i, j in enumerate(sigma):
            prod *= a[i][j]
            if not prod:
                break
        total += prod
    return total


def charpoly(a: Matrix) -> list[Fraction]:
    """Coefficients [1, c1, ..., cn] of det(t·I − a), via Berkowitz.

    Division-free, so it is exact over any commutative ring.
    """
    n = len(a)
    if n == 0:
        return [Fraction(1)]
    # Bordering: extend the char poly of the leading r×r block to (r+1)×(r+1)
    # by a Toeplitz product built from R·A^k·C.
    vect = [Fraction(1), -a[0][0]]
    for r in range(1, n):
        row = a[r][:r]
        col = [a[i][r] for i in range(r)]
        block = [ai[:r] for ai in a[:r]]
        toep = [Fraction(1), -a[r][r]]
        cur = col
        for _ in range(r):
            toep.append(-sum((x * y for x, y in zip(row, cur)), Fraction(0)))
            cur = matvec(block, cur)
        vect = [
            sum((toep[i - j] * vect[j] for j in range(min(i, r) + 1)), Fraction(0))
            for i in range(r + 2)
        ]
    return vect


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive(v: Sequence) -> list[int]:
    """Scale a rational vector to the primitive integer vector on its ray."""
    fr = [to_fraction(x) for x in v]
    if not any(fr):
        raise ValueError("zero vector has no primitive representative")
    den = lcm(*(x.denominator for x in fr)) if fr else 1
    ints = [int(x * den) for x in fr]
    g = content(ints)
    return [x // g for x in ints]


def solve(a: Matrix, b: Sequence) -> list[Fraction]:
    """Solve a·x = b for square invertible a."""
    return matvec(inverse(a), [to_fraction(x) for x in b])
