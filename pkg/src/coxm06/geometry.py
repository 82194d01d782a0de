"""Fixed coordinates for P^3 (five points) and for the plane models.

Everything here is solved exactly from coordinates: planes, quadrics, lines
and the coefficients of linear relations inside pencils.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .linalg import nullspace, solve
from .polyform import PolyForm, jet_rows, monomials, points_on_segment

# P^3: coordinate points and (1:1:1:1)
P3_POINTS = {
    1: (1, 0, 0, 0),
    2: (0, 1, 0, 0),
    3: (0, 0, 1, 0),
    4: (0, 0, 0, 1),
    5: (1, 1, 1, 1),
}

# lines L_x, L_y, L_z through p5 meeting two opposite edges of the tetrahedron
L_LINES = {
    "x": ((1, 0, 1, 0), (0, 1, 0, 1)),
    "y": ((1, 0, 0, 1), (0, 1, 1, 0)),
    "z": ((1, 1, 0, 0), (0, 0, 1, 1)),
}

# P^2 = exceptional divisor over p5 (projection from p5)
Q_POINTS = {1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1), 4: (1, 1, 1)}


def project_from_p5(p):
    return (p[0] - p[3], p[1] - p[3], p[2] - p[3])


def cross(u, v):
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def _proj_point(v):
    """Scale an integer vector so that its first nonzero entry is 1 when possible."""
    v = [Fraction(x) for x in v]
    lead = next(x for x in v if x)
    return tuple(x / lead for x in v)


def _line_form(u, v) -> PolyForm:
    return PolyForm.linear(cross(u, v)).normalized()


def _meet(l1: PolyForm, l2: PolyForm):
    a = [l1.coeffs.get(e, 0) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    b = [l2.coeffs.get(e, 0) for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    p = _proj_point(cross(a, b))
    return tuple(int(x) if Fraction(x).denominator == 1 else x for x in p)


@lru_cache(maxsize=None)
def q_line(i: int, j: int) -> PolyForm:
    """The line through q_i and q_j in P^2."""
    return _line_form(Q_POINTS[i], Q_POINTS[j])


DIAGONAL_POINTS = {
    "x": _meet(q_line(1, 3), q_line(2, 4)),
    "y": _meet(q_line(1, 4), q_line(2, 3)),
    "z": _meet(q_line(1, 2), q_line(3, 4)),
}

SURFACE_POINTS = {**{k: v for k, v in Q_POINTS.items()}, **DIAGONAL_POINTS}


@lru_cache(maxsize=None)
def surface_line(a, b) -> PolyForm:
    """Line through two of the named points q1..q4, x, y, z."""
    return _line_form(SURFACE_POINTS[a], SURFACE_POINTS[b])


@lru_cache(maxsize=None)
def plane_form(i: int, j: int, k: int) -> PolyForm:
    """The plane through p_i, p_j, p_k."""
    rows = [P3_POINTS[t] for t in (i, j, k)]
    (v,) = nullspace(rows, 4)
    return PolyForm.linear(v).normalized()


@lru_cache(maxsize=None)
def kv_quadric(i: int, j: int, k: int, l: int) -> PolyForm:
    """The quadric through p1..p5 containing the lines l_ik, l_il, l_jk, l_jl."""
    exps = monomials(4, 2)
    rows = []
    for p in P3_POINTS.values():
        rows.append([_eval_monomial(e, p) for e in exps])
    for a, b in ((i, k), (i, l), (j, k), (j, l)):
        for p in points_on_segment(P3_POINTS[a], P3_POINTS[b], 3):
            rows.append([_eval_monomial(e, p) for e in exps])
    ker = nullspace(rows, len(exps))
    if len(ker) != 1:
        raise AssertionError("quadric not unique")
    return PolyForm(4, 2, dict(zip(exps, ker[0]))).normalized()


def _eval_monomial(e, p):
    v = 1
    for x, a in zip(p, e):
        v *= x ** a
    return v


def pencil_coefficients(f: PolyForm, g: PolyForm, h: PolyForm) -> tuple:
    """(lam, mu) with f = lam*g + mu*h, solved exactly."""
    if not (f.degree == g.degree == h.degree and f.nvars == g.nvars == h.nvars):
        raise ValueError("pencil members must share a degree")
    lam, mu = solve([g.dense(), h.dense()], f.dense())
    return lam, mu


def vanishing_order_at(f: PolyForm, point) -> int:
    """Multiplicity of a nonzero form at a point, from its Taylor coefficients."""
    if f.is_zero():
        raise ValueError("the zero form has no finite multiplicity")
    chart = next(t for t, x in enumerate(point) if x)
    scaled = tuple(Fraction(x) / point[chart] for x in point)
    exps = list(f.coeffs)
    coeffs = [f.coeffs[e] for e in exps]
    for order in range(f.degree + 1):
        for row in jet_rows(exps, scaled, order + 1, chart, min_order=order):
            if sum(c * r for c, r in zip(coeffs, row)):
                return order
    raise AssertionError("nonzero form with all Taylor coefficients zero")


def vanishing_order_along(f: PolyForm, p, q) -> int:
    """Minimum multiplicity of f over d+1 sample points of the line pq."""
    pts = points_on_segment(p, q, f.degree + 2)
    return min(vanishing_order_at(f, t) for t in pts)


__all__ = [
    "P3_POINTS", "L_LINES", "Q_POINTS", "DIAGONAL_POINTS", "SURFACE_POINTS",
    "project_from_p5", "q_line", "surface_line", "plane_form", "kv_quadric",
    "pencil_coefficients", "vanishing_order_at", "vanishing_order_along",
]
