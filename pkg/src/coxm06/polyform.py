"""Homogeneous forms with exact rational coefficients."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple:
    """Exponent tuples of the given degree, in descending lexicographic order."""
    if degree < 0:
        return ()
    out = []

    def rec(prefix, left, k):
        if k == 1:
            out.append(prefix + (left,))
            return
        for a in range(left, -1, -1):
            rec(prefix + (a,), left - a, k - 1)

    rec((), degree, nvars)
    return tuple(out)


@dataclass(frozen=True)
class PolyForm:
    nvars: int
    degree: int
    coeffs: dict = field(default_factory=dict, hash=False, compare=False)

    def __post_init__(self):
        clean = {}
        for e, c in self.coeffs.items():
            if len(e) != self.nvars or sum(e) != self.degree:
                raise ValueError(f"exponent {e} does not fit a degree {self.degree} form")
            c = Fraction(c)
            if c:
                clean[tuple(e)] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def one(cls, nvars: int) -> PolyForm:
        return cls(nvars, 0, {(0,) * nvars: 1})

    @classmethod
    def linear(cls, coeffs: Sequence) -> PolyForm:
        n = len(coeffs)
        return cls(n, 1, {tuple(int(i == k) for i in range(n)): c
                          for k, c in enumerate(coeffs)})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __mul__(self, other):
        if not isinstance(other, PolyForm):
            return PolyForm(self.nvars, self.degree,
                            {e: c * other for e, c in self.coeffs.items()})
        if other.nvars != self.nvars:
            raise ValueError("mixed variable counts")
        out: dict = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return PolyForm(self.nvars, self.degree + other.degree, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> PolyForm:
        out = PolyForm.one(self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def __add__(self, other: PolyForm) -> PolyForm:
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if (other.nvars, other.degree) != (self.nvars, self.degree):
            raise ValueError("adding forms of different shape")
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return PolyForm(self.nvars, self.degree, out)

    def __neg__(self) -> PolyForm:
        return self * -1

    def __sub__(self, other: PolyForm) -> PolyForm:
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return (self.nvars, self.degree, self.coeffs) == (other.nvars, other.degree, other.coeffs)

    def __hash__(self):
        return hash((self.nvars, self.degree, frozenset(self.coeffs.items())))

    def __call__(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for e, c in self.coeffs.items():
            t = c
            for x, a in zip(point, e):
                if a:
                    t *= Fraction(x) ** a
            total += t
        return total

    def normalized(self) -> PolyForm:
        """Scale so the first nonzero coefficient (descending lex) is 1."""
        if self.is_zero():
            return self
        lead = self.coeffs[max(self.coeffs)]
        return self * (1 / lead)

    def dense(self) -> list:
        return [self.coeffs.get(e, Fraction(0)) for e in monomials(self.nvars, self.degree)]

    def __str__(self) -> str:
        names = "xyzw"[: self.nvars] if self.nvars <= 4 else None
        if self.is_zero():
            return "0"
        terms = []
        for e in sorted(self.coeffs, reverse=True):
            c = self.coeffs[e]
            mon = "*".join(f"{names[i]}^{a}" if a > 1 else names[i]
                           for i, a in enumerate(e) if a)
            terms.append(f"({c})" + (f"*{mon}" if mon else ""))
        return " + ".join(terms)


def jet_rows(exps: Sequence[tuple], point: Sequence, order: int,
             chart: int, min_order: int = 0) -> list:
    """Conditions that a form vanishes to order >= `order` at `point`.

    The form is dehomogenized by setting variable `chart` to 1 (point[chart]
    must be 1); one row per affine Taylor coefficient of total order < order,
    one column per exponent in `exps`.  Orders below `min_order` are skipped.
    """
    if order <= 0:
        return []
    if point[chart] != 1:
        raise ValueError("chart coordinate of the point must be 1")
    n = len(point)
    free = [i for i in range(n) if i != chart]
    rows = []
    for total in range(min_order, order):
        for b in monomials(n - 1, total):
            row = []
            for e in exps:
                v = 1
                for k, i in enumerate(free):
                    a = e[i]
                    if b[k] > a:
                        v = 0
                        break
                    v *= comb(a, b[k]) * point[i] ** (a - b[k])
                row.append(v)
            rows.append(row)
    return rows


def points_on_segment(p: Sequence[int], q: Sequence[int], count: int) -> list:
    """count distinct points p + t*(q - p), t = 0..count-1."""
    return [tuple(a + t * (b - a) for a, b in zip(p, q)) for t in range(count)]


def product(forms, nvars: int) -> PolyForm:
    out = PolyForm.one(nvars)
    for f in forms:
        out = out * f
    return out
