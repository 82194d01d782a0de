"""Interpolation oracle: exact h^0 by linear algebra on forms.

Sections of D = dH - sum m_i E_i - sum m_ij E_ij are degree d forms on P^3
with multiplicity >= m_i at p_i and >= m_ij along the line p_i p_j.
Negative multiplicities impose nothing.  p1..p4 are coordinate points, so
their conditions and those of the six coordinate lines only remove
monomials; the conditions at p5 and along the lines p_i p_5 are imposed by
Taylor coefficients at d+1 points of each line.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import geometry as geo
from .lattice import (GENERATORS, DivisorClass, Generator, Monomial, PAIRS,
                      gclass, pair_index)
from .linalg import rank
from .polyform import PolyForm, jet_rows, monomials

COORD_PAIRS = tuple(p for p in PAIRS if 5 not in p)


def _clamp(x: int) -> int:
    return x if x > 0 else 0


def _support(d: int, m, mline) -> list:
    """Monomials of degree d satisfying the coordinate point/line conditions."""
    out = []
    for e in monomials(4, d):
        ok = all(e[i] <= d - _clamp(m[i]) for i in range(4))
        if ok:
            for (i, j) in COORD_PAIRS:
                mij = _clamp(mline[pair_index(i, j)])
                if mij and (d - e[i - 1] - e[j - 1]) < mij:
                    ok = False
                    break
        if ok:
            out.append(e)
    return out


def _line_jet_rows(exps, d, i, order, extra_points=0):
    """Order-`order` conditions along the line p_i p_5 (i in 1..4)."""
    if order <= 0:
        return []
    chart = 0 if i != 1 else 1
    base = geo.P3_POINTS[5]
    rows = []
    for t in range(d + 1 + extra_points):
        p = list(base)
        p[i - 1] += t
        rows.extend(jet_rows(exps, p, order, chart))
    return rows


def _generic_point_rows(exps, p, order):
    chart = next(k for k, x in enumerate(p) if x == 1)
    return jet_rows(exps, p, order, chart)


def condition_rows(D: DivisorClass, exps, extra_points=0) -> list:
    """Rows imposing the p5 and l_i5 conditions on the monomial basis exps."""
    rows = []
    rows.extend(jet_rows(exps, geo.P3_POINTS[5], _clamp(D.m[4]), 0))
    for i in range(1, 5):
        rows.extend(_line_jet_rows(exps, D.d, i, _clamp(D.mij(i, 5)), extra_points))
    return rows


def h0_p3(D: DivisorClass) -> int:
    """dim H^0 of D on the blow-up of P^3 at p1..p5 and the ten lines."""
    if D.d < 0:
        return 0
    exps = _support(D.d, D.m, D.mline)
    if not exps:
        return 0
    rows = condition_rows(D, exps)
    return len(exps) - rank(rows, len(exps))


def h0_p3_generic(D: DivisorClass, extra_points: int = 0) -> int:
    """Same dimension with every condition imposed by Taylor coefficients.

    Slow; kept as an independent cross-check of the support shortcut.
    """
    d = D.d
    if d < 0:
        return 0
    exps = list(monomials(4, d))
    rows = []
    for i in range(1, 6):
        rows.extend(_generic_point_rows(exps, geo.P3_POINTS[i], _clamp(D.mi(i))))
    for (i, j) in PAIRS:
        order = _clamp(D.mij(i, j))
        if not order:
            continue
        a, b = geo.P3_POINTS[i], geo.P3_POINTS[j]
        if j == 5:
            pts = [tuple(x + t * y for x, y in zip(b, a)) for t in range(d + 1 + extra_points)]
        else:
            pts = [tuple(x + t * y for x, y in zip(a, b)) for t in range(d + 1 + extra_points)]
        for p in pts:
            rows.extend(_generic_point_rows(exps, p, order))
    return len(exps) - rank(rows, len(exps))


def _line_rows(exps, d, p, q, order, extra_points=0):
    """Order conditions at d+1 points p + t q (the first coordinate of p must be 1
    and that of q must be 0, so chart 0 works)."""
    rows = []
    for t in range(d + 1 + extra_points):
        pt = tuple(a + t * b for a, b in zip(p, q))
        rows.extend(jet_rows(exps, pt, order, 0))
    return rows


def _alpha_rows(exps, d, alpha, order):
    p, q = geo.L_LINES[alpha]
    return _line_rows(exps, d, p, q, order)


def generic_vanishing_order(D: DivisorClass, alpha: str) -> int:
    """Largest m such that every section of D vanishes to order m along L_alpha."""
    if D.d < 0:
        raise ValueError("no sections")
    exps = _support(D.d, D.m, D.mline)
    base = condition_rows(D, exps)
    h = len(exps) - rank(base, len(exps))
    if h == 0:
        raise ValueError("generic vanishing order is undefined for an empty section space")
    m = 0
    while m <= D.d:
        rows = base + _alpha_rows(exps, D.d, alpha, m + 1)
        if len(exps) - rank(rows, len(exps)) != h:
            return m
        m += 1
    raise AssertionError("a nonzero form cannot vanish to order > d along a line")


# ----------------------------------------------------------- surface models

SURFACE_CONFIGS = {
    "Bl4": (1, 2, 3, 4),
    "Bl4q": (1, 2, 3, 4),
    "KV6": (1, 2, 3, 4, "x", "y"),
    "Y7": (1, 2, 3, 4, "x", "y", "z"),
}


def h0_surface(config: str, S) -> int:
    """h^0 of a plane-model class (S.d; S.m[, S.mx, S.my, S.mz]).

    Bl4q is the plane of three of the p_i with the trace q of the opposite line
    in the fourth slot; any four points in general position are projectively
    equivalent, so it uses the same coordinates as Bl4.
    """
    if config not in SURFACE_CONFIGS:
        raise ValueError(f"unknown surface configuration {config!r}")
    names = SURFACE_CONFIGS[config]
    mults = list(S.m)
    if len(names) > 4:
        mults += [S.mx, S.my, S.mz][: len(names) - 4]
    d = S.d
    if d < 0:
        return 0
    exps = list(monomials(3, d))
    rows = []
    for name, mult in zip(names, mults):
        p = geo.SURFACE_POINTS[name]
        rows.extend(_generic_point_rows(exps, p, _clamp(mult)))
    return len(exps) - rank(rows, len(exps))


# ------------------------------------------------------ monomial enumeration

_HEAVY = tuple(g for g in GENERATORS if g.kind in ("L", "Q"))
_LIGHT = tuple(g for g in GENERATORS if g.kind in ("E", "Eij"))
_HEAVY_CONTRIB = np.array([gclass(g).vector()[1:] for g in _HEAVY], dtype=np.int64)
_HEAVY_WEIGHT = [gclass(g).d for g in _HEAVY]


@lru_cache(maxsize=16)
def _heavy_table(d: int):
    """All exponent vectors on planes and quadrics of total degree d, with
    their (m, mline) contributions."""
    rows = []

    def rec(k, left, cur):
        if k == len(_HEAVY):
            if left == 0:
                rows.append(tuple(cur))
            return
        w = _HEAVY_WEIGHT[k]
        for n in range(left // w + 1):
            cur.append(n)
            rec(k + 1, left - n * w, cur)
            cur.pop()

    rec(0, d, [])
    exps = np.array(rows, dtype=np.int64).reshape(len(rows), len(_HEAVY))
    return exps, exps @ _HEAVY_CONTRIB


def enumerate_monomials(D: DivisorClass) -> list:
    """Every monomial in the 40 generators whose class is exactly D."""
    if D.d < 0:
        return []
    exps, contrib = _heavy_table(D.d)
    target = np.array(D.m + D.mline, dtype=np.int64)
    light = contrib - target  # exponents of E_i then E_ij
    keep = np.all(light >= 0, axis=1)
    out = []
    for hv, lv in zip(exps[keep], light[keep]):
        pairs = [(g, int(n)) for g, n in zip(_HEAVY, hv) if n]
        pairs += [(g, int(n)) for g, n in zip(_LIGHT, lv) if n]
        out.append(Monomial(tuple(pairs)))
    out.sort(key=lambda mon: [(g.rank, n) for g, n in mon.exps])
    return out


def generator_form(g: Generator) -> PolyForm:
    if g.kind == "L":
        return geo.plane_form(*g.idx)
    if g.kind == "Q":
        return geo.kv_quadric(*g.idx)
    return PolyForm.one(4)


@lru_cache(maxsize=4096)
def _power(g: Generator, n: int) -> PolyForm:
    return generator_form(g) ** n


def monomial_to_poly(mon: Monomial) -> PolyForm:
    out = PolyForm.one(4)
    for g, n in mon.exps:
        if g.kind in ("L", "Q"):
            out = out * _power(g, n)
    return out


def span_rank(polys) -> int:
    polys = list(polys)
    if not polys:
        return 0
    shape = {(p.nvars, p.degree) for p in polys}
    if len(shape) != 1:
        raise ValueError("span_rank needs forms of one degree in one set of variables")
    nv, deg = shape.pop()
    exps = monomials(nv, deg)
    col = {e: k for k, e in enumerate(exps)}
    rows = []
    for p in polys:
        r = [0] * len(exps)
        for e, c in p.coeffs.items():
            r[col[e]] = c
        rows.append(r)
    return rank(rows, len(exps))


@dataclass
class VerifyReport:
    cls: DivisorClass
    h0: int
    n_monomials: int
    rank: int
    passed: bool
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"class": str(self.cls), "h0": self.h0, "n_monomials": self.n_monomials,
                "rank": self.rank, "pass": self.passed, "seconds": round(self.seconds, 4)}


def verify_theorem(D: DivisorClass) -> VerifyReport:
    """Compare the span of distinguished monomials with h^0(D)."""
    t0 = time.perf_counter()
    h = h0_p3(D)
    mons = enumerate_monomials(D)
    r = span_rank(monomial_to_poly(m) for m in mons) if mons else 0
    return VerifyReport(D, h, len(mons), r, r == h, time.perf_counter() - t0)


def check_monomial_vanishing(mon: Monomial) -> bool:
    """The form of a monomial vanishes to at least the orders its class prescribes."""
    D = mon.cls()
    f = monomial_to_poly(mon)
    for i in range(1, 6):
        if _clamp(D.mi(i)) and geo.vanishing_order_at(f, geo.P3_POINTS[i]) < D.mi(i):
            return False
    for (i, j) in PAIRS:
        need = _clamp(D.mij(i, j))
        if need and geo.vanishing_order_along(f, geo.P3_POINTS[i], geo.P3_POINTS[j]) < need:
            return False
    return True
