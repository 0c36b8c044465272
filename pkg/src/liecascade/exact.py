"""Exact rational linear algebra on small dense matrices.

Thin wrappers over python-flint so the rest of the package can pass plain
tuples of ints and Fractions around.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import flint

Number = int | Fraction
Vector = tuple[Number, ...]


def _integer_rows(rows: Sequence[Sequence[Number]]) -> list[list[int]]:
    out = []
    for row in rows:
        if all(type(x) is int for x in row):
            out.append(list(row))
            continue
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def primitive(vec: Sequence[Number]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector.

    The sign is fixed so that the first nonzero entry is positive.
    """
    ints = _integer_rows([vec])[0]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return tuple(x // g for x in ints)


def rank(rows: Sequence[Sequence[Number]]) -> int:
    rows = [r for r in rows]
    if not rows:
        return 0
    return flint.fmpz_mat(_integer_rows(rows)).rank()


def row_space_basis(rows: Sequence[Sequence[Number]], ncols: int) -> list[tuple[int, ...]]:
    """Canonical basis of the row space: the primitive rows of the rref."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return []
    m = flint.fmpq_mat(flint.fmpz_mat(_integer_rows(rows)))
    red, rk = m.rref()
    out = []
    for i in range(rk):
        out.append(primitive([Fraction(int(red[i, j].p), int(red[i, j].q)) for j in range(ncols)]))
    return out


def kernel(rows: Sequence[Sequence[Number]], ncols: int) -> list[tuple[int, ...]]:
    """Canonical integer basis of {x : row . x = 0 for every row}."""
    rows = [r for r in rows if any(r)]
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    mat = flint.fmpz_mat(_integer_rows(rows))
    null, dim = mat.nullspace()
    if dim == 0:
        return []
    vecs = [[int(null[i, j]) for i in range(ncols)] for j in range(dim)]
    return row_space_basis(vecs, ncols)


def in_span(basis: Sequence[Sequence[Number]], vec: Sequence[Number]) -> bool:
    if not any(vec):
        return True
    return rank(list(basis) + [vec]) == rank(basis)


def int_matrix(rows: Sequence[Sequence[int]]) -> flint.fmpz_mat:
    """Integer matrix for fast products and equality tests."""
    return flint.fmpz_mat([list(r) for r in rows])
