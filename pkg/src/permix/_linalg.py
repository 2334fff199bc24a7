"""Small exact linear algebra over Fractions (Gaussian elimination)."""

from fractions import Fraction
from functools import reduce
from math import gcd, lcm


def _echelon(rows):
    """Row-reduce a copy of ``rows``; return (reduced rows, pivot columns)."""
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return mat, []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def rank(rows) -> int:
    if not rows:
        return 0
    if all(type(x) is int for row in rows for x in row):
        return _int_rank(rows)
    return len(_echelon(rows)[1])


def _int_rank(rows) -> int:
    # fraction-free elimination; rows are rescaled by their gcd to stay small
    mat = [list(row) for row in rows]
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        p = mat[r][c]
        for i in range(r + 1, len(mat)):
            f = mat[i][c]
            if f:
                row = [p * a - f * b for a, b in zip(mat[i], mat[r])]
                g = reduce(gcd, row, 0)
                mat[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(mat):
            break
    return r


def affine_rank(points) -> int:
    """Dimension of the affine hull of ``points`` (-1 for no points)."""
    points = list(points)
    if not points:
        return -1
    base = points[0]
    return rank([[a - b for a, b in zip(p, base)] for p in points[1:]])


def solve(matrix, rhs):
    """Solve a square system exactly; None if singular."""
    n = len(matrix)
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = _echelon(aug)
    if pivots[:n] != list(range(n)) or len(pivots) > n:
        return None
    return tuple(red[i][n] for i in range(n))


def nullvector(rows, dim):
    """A primitive integer vector spanning the kernel of ``rows``.

    Returns None unless the kernel is exactly one-dimensional.  The sign is
    fixed so that the first nonzero entry is positive.
    """
    red, pivots = _echelon(rows) if rows else ([], [])
    free = [c for c in range(dim) if c not in pivots]
    if len(free) != 1:
        return None
    f = free[0]
    vec = [Fraction(0)] * dim
    vec[f] = Fraction(1)
    for i, c in enumerate(pivots):
        vec[c] = -red[i][f]
    return primitive(vec)


def primitive(vec):
    """Scale a rational vector to the primitive integer vector, first nonzero > 0."""
    vec = [Fraction(x) for x in vec]
    den = reduce(lcm, (x.denominator for x in vec), 1)
    ints = [int(x * den) for x in vec]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)


def det(matrix) -> Fraction:
    mat = [[Fraction(x) for x in row] for row in matrix]
    n = len(mat)
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if mat[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            mat[c], mat[pivot] = mat[pivot], mat[c]
            result = -result
        result *= mat[c][c]
        inv = 1 / mat[c][c]
        for i in range(c + 1, n):
            if mat[i][c] != 0:
                f = mat[i][c] * inv
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[c])]
    return result


def dot(a, b):
    return sum(x * y for x, y in zip(a, b) if x)
