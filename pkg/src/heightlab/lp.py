"""Exact rational feasibility LP: find x >= 0 with A·x = b.

Phase-one simplex on a dense Fraction tableau.  Bland's rule (lowest index
entering and leaving) guarantees termination without any tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import linalg as la


class LPError(RuntimeError):
    pass


def feasible_point(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Return a vertex x >= 0 of {A·x = b}, or None if the system is infeasible."""
    rows = [[la.to_fraction(x) for x in r] for r in a]
    rhs = [la.to_fraction(x) for x in b]
    m = len(rows)
    n = len(rows[0]) if rows else 0
    if m == 0:
        return [Fraction(0)] * n
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    # tableau columns: n structural, m artificial, then rhs
    tab = [rows[i] + [Fraction(int(i == j)) for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    width = n + m
    # reduced-cost row for min Σ artificials, expressed in the nonbasic variables
    cost = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(width + 1):
            cost[j] -= tab[i][j]
    for i in range(m):
        cost[n + i] += 1

    for _ in range(10_000 * (width + 1)):
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise LPError("phase-one objective unbounded; cannot happen for a bounded-below sum")
        _pivot(tab, cost, leave, enter)
        basis[leave] = enter
    else:
        raise LPError("simplex did not terminate")

    if -cost[-1] != 0:
        return None
    x = [Fraction(0)] * width
    for i, v in enumerate(basis):
        x[v] = tab[i][-1]
    return x[:n]


def _pivot(tab: list[list[Fraction]], cost: list[Fraction], r: int, c: int) -> None:
    p = tab[r][c]
    tab[r] = [x / p for x in tab[r]]
    pr = tab[r]
    for i in range(len(tab)):
        if i != r:
            f = tab[i][c]
            if f:
                tab[i] = [x - f * y for x, y in zip(tab[i], pr)]
    f = cost[c]
    if f:
        for j in range(len(cost)):
            cost[j] -= f * pr[j]
