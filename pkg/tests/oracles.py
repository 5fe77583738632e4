"""Independent reference computations used only by the tests."""

import itertools
from math import factorial

import sympy


def hull_oracle(weights):
    """Is 0 in conv(weights) modulo the diagonal?  Carathéodory brute force.

    Weights are projected to ℚ^{N−1} by differencing consecutive coordinates.
    0 lies in the hull iff it is a convex combination of some affinely
    independent subset of at most N points, whose barycentric coordinates are
    then unique.
    """
    pts = sorted({tuple(w[c] - w[c + 1] for c in range(len(w) - 1)) for w in weights})
    dim = len(pts[0])
    if dim == 0 or any(all(x == 0 for x in p) for p in pts):
        return True
    for k in range(2, dim + 2):
        for sub in itertools.combinations(pts, k):
            a = sympy.Matrix([[p[c] for p in sub] for c in range(dim)] + [[1] * k])
            if a.rank() < k:
                continue
            b = sympy.Matrix([0] * dim + [1])
            try:
                sol, params = a.gauss_jordan_solve(b)
            except ValueError:
                continue
            if params.shape[0]:
                continue
            if all(x >= 0 for x in sol):
                return True
    return False


def hook_length_syt(rows, cols):
    """Number of standard Young tableaux of a rows × cols rectangle."""
    hooks = 1
    for i in range(rows):
        for j in range(cols):
            hooks *= (rows - i - 1) + (cols - j - 1) + 1
    return factorial(rows * cols) // hooks
