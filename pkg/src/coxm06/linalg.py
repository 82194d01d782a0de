"""Exact linear algebra over Z and Q, thin wrappers around sympy's DomainMatrix."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix


def _to_int_rows(rows: Sequence[Sequence]) -> list:
    """Clear denominators row by row (rank is unchanged)."""
    out = []
    for r in rows:
        den = 1
        for x in r:
            if isinstance(x, Fraction):
                den = lcm(den, x.denominator)
        out.append([int(x * den) for x in r])
    return out


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    """Exact rank of a matrix of ints or Fractions.

    Uses fraction-free elimination over Z.
    """
    rows = [r for r in _to_int_rows(rows) if any(r)]
    if not rows:
        return 0
    n = ncols if ncols is not None else len(rows[0])
    if n == 0:
        return 0
    M = DomainMatrix([[ZZ(x) for x in r] for r in rows], (len(rows), n), ZZ)
    return M.rank()


def nullspace(rows: Sequence[Sequence], ncols: int) -> list:
    """Basis of the right kernel as lists of Fractions."""
    rows = [r for r in _to_int_rows(rows) if any(r)]
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    M = DomainMatrix([[QQ(x) for x in r] for r in rows], (len(rows), ncols), QQ)
    basis = M.nullspace().to_Matrix().tolist()
    return [[Fraction(int(x.p), int(x.q)) for x in v] for v in basis]


def solve(columns: Sequence[Sequence], target: Sequence) -> list:
    """Unique x with sum x_k * columns[k] = target, exactly.

    Raises ValueError if there is no solution or it is not unique.
    """
    n = len(columns)
    dim = len(target)
    rows = [[Fraction(columns[k][t]) for k in range(n)] + [-Fraction(target[t])]
            for t in range(dim)]
    ker = nullspace(rows, n + 1)
    ker = [v for v in ker if v[-1] != 0]
    if len(ker) != 1 or len(nullspace([r[:-1] for r in rows], n)) != 0:
        raise ValueError("linear system has no unique solution")
    v = ker[0]
    return [x / v[-1] for x in v[:-1]]


def primitive(vec: Sequence) -> list:
    """Scale a rational vector so it is integral, content 1, first nonzero > 0."""
    vec = [Fraction(x) for x in vec]
    den = 1
    for x in vec:
        den = lcm(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return ints
    first = next(x for x in ints if x)
    if first < 0:
        g = -g
    return [x // g for x in ints]
