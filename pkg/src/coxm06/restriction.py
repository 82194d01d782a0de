"""Restrictions of divisor classes to the 40 generator divisors, the
necessary inequalities they imply, and constructive effective-cone engines
for the plane models (P^2 blown up at four points, and the surface Y).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import geometry as geo
from .certificates import EffCertificate
from .lattice import (ALPHA_PAIRS, CHI, GENERATORS, PAIRS, POINTS, TRIPLES,
                      DivisorClass, Generator, generator)
from .polyform import PolyForm

# ------------------------------------------------------------------- types


@dataclass(frozen=True)
class Surface4Class:
    """d H - sum m_i E_i on P^2 blown up at four points."""

    d: int
    m: tuple

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if len(self.m) != 4:
            raise ValueError("Surface4Class needs four multiplicities")

    @classmethod
    def zero(cls) -> Surface4Class:
        return cls(0, (0, 0, 0, 0))

    def __add__(self, o: Surface4Class) -> Surface4Class:
        return Surface4Class(self.d + o.d, tuple(a + b for a, b in zip(self.m, o.m)))

    def __sub__(self, o: Surface4Class) -> Surface4Class:
        return Surface4Class(self.d - o.d, tuple(a - b for a, b in zip(self.m, o.m)))

    def __mul__(self, k: int) -> Surface4Class:
        return Surface4Class(k * self.d, tuple(k * a for a in self.m))

    __rmul__ = __mul__

    def dot(self, o: Surface4Class) -> int:
        return self.d * o.d - sum(a * b for a, b in zip(self.m, o.m))

    def __str__(self) -> str:
        return f"{self.d};" + ",".join(map(str, self.m))


def s4_line(i: int, j: int) -> Surface4Class:
    m = [0] * 4
    m[i - 1] = m[j - 1] = 1
    return Surface4Class(1, m)


def s4_exc(i: int) -> Surface4Class:
    m = [0] * 4
    m[i - 1] = -1
    return Surface4Class(0, m)


@dataclass(frozen=True)
class SurfaceYClass:
    """d H - sum m_i E_i - mx E_x - my E_y - mz E_z on P^2 blown up at
    q1..q4 and the diagonal points x, y, z."""

    d: int
    m: tuple
    mx: int = 0
    my: int = 0
    mz: int = 0

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        if len(self.m) != 4:
            raise ValueError("SurfaceYClass needs four point multiplicities")

    @classmethod
    def zero(cls) -> SurfaceYClass:
        return cls(0, (0, 0, 0, 0))

    def vector(self) -> tuple:
        return (self.d,) + self.m + (self.mx, self.my, self.mz)

    @classmethod
    def from_vector(cls, v) -> SurfaceYClass:
        return cls(v[0], tuple(v[1:5]), v[5], v[6], v[7])

    def __add__(self, o: SurfaceYClass) -> SurfaceYClass:
        return SurfaceYClass.from_vector([a + b for a, b in zip(self.vector(), o.vector())])

    def __sub__(self, o: SurfaceYClass) -> SurfaceYClass:
        return SurfaceYClass.from_vector([a - b for a, b in zip(self.vector(), o.vector())])

    def __mul__(self, k: int) -> SurfaceYClass:
        return SurfaceYClass.from_vector([k * a for a in self.vector()])

    __rmul__ = __mul__

    def malpha(self, a: str) -> int:
        return {"x": self.mx, "y": self.my, "z": self.mz}[a]

    def dot(self, o: SurfaceYClass) -> int:
        u, v = self.vector(), o.vector()
        return u[0] * v[0] - sum(a * b for a, b in zip(u[1:], v[1:]))

    def __str__(self) -> str:
        return (f"{self.d};" + ",".join(map(str, self.m))
                + f";{self.mx},{self.my},{self.mz}")


def y_point_class(name) -> SurfaceYClass:
    """Exceptional class over q_i (int name) or a diagonal point ('x','y','z')."""
    v = [0] * 8
    slot = name if isinstance(name, int) else 5 + "xyz".index(name)
    v[slot] = -1
    return SurfaceYClass.from_vector(v)


def y_line_class(*names) -> SurfaceYClass:
    """H minus the exceptional classes over the given points."""
    out = SurfaceYClass(1, (0, 0, 0, 0))
    for n in names:
        out = out - y_point_class(n)
    return out


@dataclass(frozen=True)
class Bidegree:
    a: int
    b: int

    def __iter__(self):
        return iter((self.a, self.b))


# ------------------------------------------------------------ restrictions


def restrict_to_Ei(D: DivisorClass, i: int) -> Surface4Class:
    if i not in POINTS:
        raise ValueError("point index must lie in 1..5")
    return Surface4Class(D.mi(i), tuple(D.mij(i, j) for j in POINTS if j != i))


def restrict_to_Eij(D: DivisorClass, i: int, j: int) -> Bidegree:
    if i == j:
        raise ValueError("need two distinct points")
    return Bidegree(D.d - D.mi(i) - D.mi(j) + D.mij(i, j), D.mij(i, j))


def restrict_to_plane(D: DivisorClass, i: int, j: int, k: int) -> Surface4Class:
    """Plane model with slots (p_i, p_j, p_k, q), q the trace of l_uv."""
    if len({i, j, k}) != 3 or not {i, j, k} <= set(POINTS):
        raise ValueError("plane needs three distinct points")
    u, v = (t for t in POINTS if t not in (i, j, k))
    mij, mik, mjk = D.mij(i, j), D.mij(i, k), D.mij(j, k)
    return Surface4Class(D.d - mij - mik - mjk,
                         (D.mi(i) - mij - mik, D.mi(j) - mij - mjk,
                          D.mi(k) - mik - mjk, D.mij(u, v)))


def kv_relabeling(g: Generator) -> tuple:
    """(i, j, k, l, u): the images of 1..5 carrying (12)(34) to g."""
    i, j, k, l = g.idx
    (u,) = (t for t in POINTS if t not in g.idx)
    return (i, j, k, l, u)


def restrict_to_KV(D: DivisorClass, kv) -> SurfaceYClass:
    """Plane model: P^2 blown up at q1..q4 and the two diagonal points x, y of
    the quadric's rulings.  kv is a Generator or a pair of pairs."""
    g = kv if isinstance(kv, Generator) else generator("Q", *kv)
    s = kv_relabeling(g)

    def m(a):
        return D.mi(s[a - 1])

    def mm(a, b):
        return D.mij(s[a - 1], s[b - 1])

    d = D.d
    return SurfaceYClass(
        2 * d - m(5) - mm(1, 3) - mm(1, 4) - mm(2, 3) - mm(2, 4),
        (m(1) - mm(1, 3) - mm(1, 4), m(2) - mm(2, 3) - mm(2, 4),
         m(3) - mm(1, 3) - mm(2, 3), m(4) - mm(1, 4) - mm(2, 4)),
        d - m(5) - mm(1, 3) - mm(2, 4),
        d - m(5) - mm(1, 4) - mm(2, 3),
        0,
    )


def restrict_to_KV_bidegree(D: DivisorClass, kv) -> tuple:
    """P^1 x P^1 model: (F1 coefficient, F2 coefficient, five point multiplicities)."""
    g = kv if isinstance(kv, Generator) else generator("Q", *kv)
    i, j, k, l, u = kv_relabeling(g)
    d = D.d
    f1 = d - D.mij(i, k) - D.mij(j, l)
    f2 = d - D.mij(i, l) - D.mij(j, k)
    pts = (D.mi(i) - D.mij(i, k) - D.mij(i, l), D.mi(j) - D.mij(j, k) - D.mij(j, l),
           D.mi(k) - D.mij(i, k) - D.mij(j, k), D.mi(l) - D.mij(i, l) - D.mij(j, l),
           D.mi(u))
    return f1, f2, pts


def restrict(D: DivisorClass, g: Generator):
    if g.kind == "E":
        return restrict_to_Ei(D, *g.idx)
    if g.kind == "Eij":
        return restrict_to_Eij(D, *g.idx)
    if g.kind == "L":
        return restrict_to_plane(D, *g.idx)
    return restrict_to_KV(D, g)


# ------------------------------------------------------ necessary conditions


def necessary_inequalities(D: DivisorClass) -> list:
    """Every instance of the restriction inequalities as (name, slack)."""
    out = []
    d = D.d
    for i in POINTS:
        others = [j for j in POINTS if j != i]
        mi = D.mi(i)
        out.append((f"E{i}: m{i}>=0", mi))
        for j in others:
            out.append((f"E{i}: m{i}>=m{min(i, j)}{max(i, j)}", mi - D.mij(i, j)))
        out.append((f"E{i}: 2m{i}>=sum m{i}j", 2 * mi - sum(D.mij(i, j) for j in others)))
    for i, j in PAIRS:
        out.append((f"E{i}{j}: m{i}{j}>=0", D.mij(i, j)))
        out.append((f"E{i}{j}: d-m{i}-m{j}+m{i}{j}>=0",
                    d - D.mi(i) - D.mi(j) + D.mij(i, j)))
    for t in TRIPLES:
        u, v = (x for x in POINTS if x not in t)
        tag = "L" + "".join(map(str, t))
        for a in t:
            b, c = (x for x in t if x != a)
            out.append((f"{tag}: d>=m{a}+m{b}{c}", d - D.mi(a) - D.mij(b, c)))
        i, j, k = t
        out.append((f"{tag}: d>=m{i}{j}+m{i}{k}+m{j}{k}+m{u}{v}",
                    d - D.mij(i, j) - D.mij(i, k) - D.mij(j, k) - D.mij(u, v)))
        out.append((f"{tag}: 2d>=m{i}+m{j}+m{k}+m{u}{v}",
                    2 * d - D.mi(i) - D.mi(j) - D.mi(k) - D.mij(u, v)))
    for g in GENERATORS:
        if g.kind != "Q":
            continue
        S = restrict_to_KV(D, g)
        s = kv_relabeling(g)
        lines = [(s[0], s[2]), (s[0], s[3]), (s[1], s[2]), (s[1], s[3])]
        names = "+".join(f"m{min(a, b)}{max(a, b)}" for a, b in lines)
        out.append((f"{g.name}: 2d>=m{s[4]}+{names}", S.d))
        for slot in range(4):
            p = s[slot]
            away = [ln for ln in lines if p not in ln]
            names = "+".join(f"m{min(a, b)}{max(a, b)}" for a, b in away)
            out.append((f"{g.name}: 2d>=m{p}+m{s[4]}+{names}", S.d - S.m[slot]))
    return out


def passes_necessary(D: DivisorClass) -> bool:
    return all(v >= 0 for _, v in necessary_inequalities(D))


def first_violation(D: DivisorClass):
    for name, v in necessary_inequalities(D):
        if v < 0:
            return name, v
    return None


def multiplicity_lower_bound(D: DivisorClass, alpha: str) -> int:
    """m5 + m_ij + m_kl - d for the two pairs attached to alpha."""
    (i, j), (k, l) = ALPHA_PAIRS[alpha]
    return D.mi(5) + D.mij(i, j) + D.mij(k, l) - D.d


# ------------------------------------------------------- Bl4 effective cone

def s4_term_name(kind: str, *idx) -> str:
    if kind == "H":
        return "H" + "".join(f"-E{i}" for i in idx)
    return f"E{idx[0]}"


def _s4_term(kind, *idx):
    if kind == "E":
        return s4_term_name("E", *idx), s4_exc(idx[0])
    m = [0] * 4
    for i in idx:
        m[i - 1] = 1
    return s4_term_name("H", *idx), Surface4Class(1, m)


def surface4_inequalities(S: Surface4Class) -> list:
    mc = [max(x, 0) for x in S.m]
    out = [("d>=0", S.d)]
    out += [(f"d-m{i}>=0", S.d - mc[i - 1]) for i in range(1, 5)]
    out.append(("2d-sum m>=0", 2 * S.d - sum(mc)))
    return out


def surface4_effective(S: Surface4Class) -> EffCertificate:
    """Decompose by the two-row table; negative m_i are split off as E_i first."""
    terms = []
    for i, mi in enumerate(S.m, start=1):
        terms += [_s4_term("E", i)] * max(-mi, 0)
    for name, v in surface4_inequalities(S):
        if v < 0:
            return EffCertificate.not_effective(name, v)
    d = S.d
    mc = [max(x, 0) for x in S.m]
    cells = []
    for i, mi in enumerate(mc, start=1):
        cells += [i] * mi
    cells += [0] * (2 * d - len(cells))
    top, bottom = cells[:d], cells[d:]
    for a, b in zip(top, bottom):
        idx = tuple(x for x in (a, b) if x)
        assert len(set(idx)) == len(idx), "column with a repeated entry"
        terms.append(_s4_term("H", *idx))
    cert = EffCertificate.effective(terms)
    assert cert.total(Surface4Class.zero()) == S
    return cert


def _line_exc_counts(cert: EffCertificate) -> tuple:
    """Rewrite table terms as lines l_ij and exceptionals E_i, avoiding l12, l34."""
    k = {p: 0 for p in itertools.combinations(range(1, 5), 2)}
    e = [0] * 5
    for name, c in cert.terms:
        if name.startswith("E"):
            e[int(name[1])] += 1
            continue
        idx = [i for i in range(1, 5) if c.m[i - 1] == 1]
        if len(idx) == 2:
            k[tuple(idx)] += 1
        elif len(idx) == 1:
            a = idx[0]
            b = next(b for b in range(1, 5) if b != a and {a, b} not in ({1, 2}, {3, 4}))
            k[tuple(sorted((a, b)))] += 1
            e[b] += 1
        else:
            k[(1, 3)] += 1
            e[1] += 1
            e[3] += 1
    return k, e


def _line_exc_cert(k: dict, e: list) -> EffCertificate:
    terms = []
    for (i, j), n in sorted(k.items()):
        terms += [(f"l{i}{j}", s4_line(i, j))] * n
    for i in range(1, 5):
        terms += [(f"E{i}", s4_exc(i))] * e[i]
    return EffCertificate.effective(terms)


def surface4_lines(S: Surface4Class) -> EffCertificate:
    """Decomposition into lines l_ij and exceptionals E_i only."""
    cert = surface4_effective(S)
    if not cert:
        return cert
    return _line_exc_cert(*_line_exc_counts(cert))


def surface4_avoid_q(S: Surface4Class) -> EffCertificate:
    """Decomposition into lines and exceptionals using neither l12 nor l34,
    so that no member passes through q = l12 & l34."""
    cert = surface4_effective(S)
    if not cert:
        return cert
    for name, v in (("D.(H-E1-E2)", S.d - S.m[0] - S.m[1]),
                    ("D.(H-E3-E4)", S.d - S.m[2] - S.m[3])):
        if v < 0:
            return EffCertificate.not_effective(name, v)
    k, e = _line_exc_counts(cert)
    moves = []
    while k[(1, 2)] or k[(3, 4)]:
        before = k[(1, 2)] + k[(3, 4)]
        if k[(1, 2)] >= k[(3, 4)]:
            if e[1]:
                k[(1, 2)] -= 1; e[1] -= 1; k[(2, 3)] += 1; e[3] += 1
                moves.append("l12+E1->l23+E3")
            elif e[2]:
                k[(1, 2)] -= 1; e[2] -= 1; k[(1, 3)] += 1; e[3] += 1
                moves.append("l12+E2->l13+E3")
            elif k[(3, 4)]:
                k[(1, 2)] -= 1; k[(3, 4)] -= 1; k[(1, 3)] += 1; k[(2, 4)] += 1
                moves.append("l12+l34->l13+l24")
            else:
                raise AssertionError("no replacement move for l12")
        else:
            if e[3]:
                k[(3, 4)] -= 1; e[3] -= 1; k[(1, 4)] += 1; e[1] += 1
                moves.append("l34+E3->l14+E1")
            elif e[4]:
                k[(3, 4)] -= 1; e[4] -= 1; k[(1, 3)] += 1; e[1] += 1
                moves.append("l34+E4->l13+E1")
            elif k[(1, 2)]:
                k[(1, 2)] -= 1; k[(3, 4)] -= 1; k[(1, 3)] += 1; k[(2, 4)] += 1
                moves.append("l12+l34->l13+l24")
            else:
                raise AssertionError("no replacement move for l34")
        assert k[(1, 2)] + k[(3, 4)] < before
    out = _line_exc_cert(k, e)
    out = EffCertificate.effective(out.terms, notes=moves)
    assert out.total(Surface4Class.zero()) == S
    return out


def surface4_decompositions(S: Surface4Class, limit: int | None = None):
    """Brute force: every way to write S as nonnegative combinations of the six
    lines and four exceptionals (as (k_lines, k_exc) dicts)."""
    lines = list(itertools.combinations(range(1, 5), 2))
    d = S.d
    if d < 0:
        return
    found = 0
    for ks in _compositions(d, len(lines)):
        m = [0] * 4
        for (i, j), n in zip(lines, ks):
            m[i - 1] += n
            m[j - 1] += n
        e = [m[t] - S.m[t] for t in range(4)]
        if min(e) >= 0:
            yield dict(zip(lines, ks)), e
            found += 1
            if limit and found >= limit:
                return


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


# --------------------------------------------------------------- Y surface


def y_running_inequalities(S: SurfaceYClass) -> list:
    out = []
    for i, j in itertools.combinations(range(1, 5), 2):
        a = CHI[(i, j)]
        out.append((f"d>=m{i}+m{j}+m{a}", S.d - S.m[i - 1] - S.m[j - 1] - S.malpha(a)))
    for a, b in (("x", "y"), ("x", "z"), ("y", "z")):
        out.append((f"d>=m{a}+m{b}", S.d - S.malpha(a) - S.malpha(b)))
    for i in range(1, 5):
        out.append((f"m{i}>=0", S.m[i - 1]))
        out.append((f"d>=m{i}", S.d - S.m[i - 1]))
    for a in "xyz":
        out.append((f"m{a}>=0", S.malpha(a)))
        out.append((f"d>=m{a}", S.d - S.malpha(a)))
    return out


# sub-blow-up at q2, x, q3, z in the slot order used by surface4_avoid_q:
# its lines 12 and 34 are the lines q2x and q3z, which meet at q4.
_FRAME = (2, "x", 3, "z")


def y_lift_witness(S: SurfaceYClass, k: int, alpha: int | None = None) -> EffCertificate:
    """Distinguished-section decomposition of
    Delta = (d-m4)H - (m1-k)E1 - m2 E2 - (m3-m4+k)E3 - mx Ex - (my-k)Ey - (mz-m4+k)Ez
    none of whose members passes through q4.

    Raises ValueError naming a failed precondition.
    """
    for name, v in y_running_inequalities(S):
        if v < 0:
            raise ValueError(f"precondition {name} fails ({v})")
    m1, m2, m3, m4 = S.m
    if not m4 <= m1 <= m2 <= m3:
        raise ValueError("precondition m4<=m1<=m2<=m3 fails")
    if not 0 <= k <= m4:
        raise ValueError("precondition 0<=k<=m4 fails")
    d, mx, my, mz = S.d, S.mx, S.my, S.mz
    delta = SurfaceYClass(d - m4, (m1 - k, m2, m3 - m4 + k, 0), mx, my - k, mz - m4 + k)
    terms = [("l'12", y_line_class(1, 2, "z"))] * (m1 - k)
    notes = []
    if my - k < 0:
        notes.append("branch my-k<0")
        terms += [("Ey", y_point_class("y"))] * (k - my)
    else:
        n1 = m1 + m4 + mx + my - d - 2 * k
        n2 = 2 * d - m2 - m3 - mx - mz - 2 * k
        if not (n1 <= n2 and 0 <= n2 and n1 <= my - k):
            raise AssertionError(f"N1={n1}, N2={n2} out of range")
        a = max(n1, 0) if alpha is None else alpha
        if not (max(n1, 0) <= a <= min(n2, my - k)):
            raise ValueError(f"alpha={a} outside [{max(n1, 0)}, {min(n2, my - k)}]")
        b = my - k - a
        notes.append(f"branch my-k>=0: N1={n1} N2={n2} alpha={a} beta={b}")
        terms += [("l_xy", y_line_class("x", "y"))] * a
        terms += [("l'23", y_line_class(2, 3, "y"))] * b
    rest = delta
    for _, c in terms:
        rest = rest - c
    assert rest.m[0] == 0 and rest.m[3] == 0 and rest.my == 0, rest
    sub = Surface4Class(rest.d, (rest.m[1], rest.mx, rest.m[2], rest.mz))
    cert = surface4_avoid_q(sub)
    if not cert:
        return EffCertificate.not_effective(
            f"sub-blow-up at q2,x,q3,z: {cert.witness[0]}", cert.witness[1], notes)
    for name, c in cert.terms:
        if name.startswith("E"):
            p = _FRAME[int(name[1]) - 1]
            terms.append((f"E{p}", y_point_class(p)))
        else:
            p, q = _FRAME[int(name[1]) - 1], _FRAME[int(name[2]) - 1]
            terms.append((f"l({p},{q})", y_line_class(p, q)))
    out = EffCertificate.effective(terms, notes)
    assert out.total(SurfaceYClass.zero()) == delta
    return out


def y_term_form(name: str):
    """The plane form of a term produced by y_lift_witness."""
    if name.startswith("E"):
        return PolyForm.one(3)
    if name == "l'12":
        return geo.surface_line(1, 2)
    if name == "l'23":
        return geo.surface_line(2, 3)
    if name == "l_xy":
        return geo.surface_line("x", "y")
    inner = name[2:-1].split(",")
    pts = [int(t) if t.isdigit() else t for t in inner]
    return geo.surface_line(*pts)
