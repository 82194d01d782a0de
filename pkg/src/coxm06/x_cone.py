"""Effective-cone certificates on X, the blow-up of P^3 at p1..p4 and the six
lines between them.

x_decompose writes a class as a nonnegative sum of the planes L_ijk and the
exceptional divisors E_i, E_ij by induction on the degree: at each step one
plane is subtracted, chosen by the case analysis below, and the remainder is
re-checked against the nef curve families (1)-(9).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .certificates import EffCertificate
from .lattice import DivisorClass, Perm5, apply_perm, generator, gclass, pair, special_curve

X_POINTS = (1, 2, 3, 4)
X_PAIRS = tuple(itertools.combinations(X_POINTS, 2))
X_TRIPLES = tuple(itertools.combinations(X_POINTS, 3))
_XPI = {}
for _n, (_a, _b) in enumerate(X_PAIRS):
    _XPI[(_a, _b)] = _XPI[(_b, _a)] = _n


@dataclass(frozen=True)
class XClass:
    d: int
    m: tuple
    mline: tuple

    def __post_init__(self):
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        object.__setattr__(self, "mline", tuple(int(x) for x in self.mline))
        if len(self.m) != 4 or len(self.mline) != 6:
            raise ValueError("XClass needs 4 point and 6 line coefficients")

    @classmethod
    def zero(cls) -> XClass:
        return cls(0, (0,) * 4, (0,) * 6)

    def mi(self, i: int) -> int:
        return self.m[i - 1]

    def mij(self, i: int, j: int) -> int:
        return self.mline[_XPI[(i, j)]]

    def embed(self) -> DivisorClass:
        ml = {p: self.mij(*p) for p in X_PAIRS}
        return DivisorClass.build(self.d, list(self.m) + [0], ml)

    @classmethod
    def from_divisor(cls, D: DivisorClass) -> XClass:
        if D.mi(5) or any(D.mij(i, 5) for i in X_POINTS):
            raise ValueError(f"class {D} has nonzero coefficients over p5")
        return cls(D.d, D.m[:4], tuple(D.mij(*p) for p in X_PAIRS))

    def __add__(self, o: XClass) -> XClass:
        return XClass(self.d + o.d, tuple(a + b for a, b in zip(self.m, o.m)),
                      tuple(a + b for a, b in zip(self.mline, o.mline)))

    def __sub__(self, o: XClass) -> XClass:
        return XClass(self.d - o.d, tuple(a - b for a, b in zip(self.m, o.m)),
                      tuple(a - b for a, b in zip(self.mline, o.mline)))

    def __mul__(self, k: int) -> XClass:
        return XClass(k * self.d, tuple(k * a for a in self.m), tuple(k * a for a in self.mline))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.d == 0 and not any(self.m) and not any(self.mline)

    def __str__(self) -> str:
        return f"{self.d};" + ",".join(map(str, self.m)) + ";" + ",".join(map(str, self.mline))


def parse_xclass(text: str) -> XClass:
    try:
        d, m, ml = text.split(";")
        return XClass(int(d), [int(x) for x in m.split(",")], [int(x) for x in ml.split(",")])
    except ValueError as exc:
        raise ValueError(f"bad X class string {text!r}") from exc


def x_cox_generators() -> list:
    """The fourteen generator names on X: E_i, E_ij and the four planes."""
    return ([f"E{i}" for i in X_POINTS] + [f"E{i}{j}" for i, j in X_PAIRS]
            + ["L" + "".join(map(str, t)) for t in X_TRIPLES])


def x_generator_class(name: str) -> XClass:
    digits = tuple(int(c) for c in name[1:])
    if name[0] == "L":
        g = generator("L", *digits)
    elif len(digits) == 1:
        g = generator("E", *digits)
    else:
        g = generator("Eij", *digits)
    return XClass.from_divisor(gclass(g))


def x_apply_perm(images: tuple, D: XClass) -> XClass:
    """Relabel the four points: i -> images[i-1]."""
    s = Perm5(tuple(images) + (5,))
    return XClass.from_divisor(apply_perm(s, D.embed()))


# ----------------------------------------------------------- curve families


def _family_curves() -> list:
    out = [("(1) l", special_curve("l"))]
    for i in X_POINTS:
        out.append((f"(2) l-e{i}", special_curve("l") - special_curve("e", i)))
    for i, j in X_PAIRS:
        out.append((f"(3) l-e{i}{j}", special_curve("l") - special_curve("eij", i, j)))
    for (i, j), (k, l) in (((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))):
        out.append((f"(4) l-e{i}{j}-e{k}{l}", special_curve("l") - special_curve("eij", i, j)
                    - special_curve("eij", k, l)))
    for i, j in X_PAIRS:
        out.append((f"(5) C{i}{j}", special_curve("Cij", i, j)))
    for i, j in itertools.permutations(X_POINTS, 2):
        out.append((f"(6) C{i};{j}", special_curve("Ci;j", i, j)))
    for i in X_POINTS:
        out.append((f"(7) C{i}", special_curve("Ci", i)))
    out.append(("(8) B", special_curve("B")))
    for i in X_POINTS:
        out.append((f"(9) B{i}", special_curve("Bi", i)))
    return out


FAMILY_CURVES = _family_curves()


def x_inequalities(D: XClass) -> tuple:
    """([(name, slack)] over families (1)-(9), strict) where strict says some
    family-(4) slack is positive."""
    E = D.embed()
    slacks = [(name, pair(E, C)) for name, C in FAMILY_CURVES]
    strict = any(v > 0 for name, v in slacks if name.startswith("(4)"))
    return slacks, strict


def _first_failure(D: XClass):
    slacks, _ = x_inequalities(D)
    for name, v in slacks:
        if v < 0:
            return name, v
    return None


def c_semi(D: XClass, i: int, j: int) -> int:
    """D.C_{i;j}."""
    return pair(D.embed(), special_curve("Ci;j", i, j))


# ------------------------------------------------------------- decomposition


def _plane(t) -> tuple:
    name = "L" + "".join(map(str, sorted(t)))
    return name, x_generator_class(name)


def negatives_decomposition(D: XClass):
    """Terms of the explicit decomposition when some index i has m_i <= 0 and
    m_ij <= 0 for all j, and d >= every m; otherwise None."""
    if D.d < 0 or any(D.d < x for x in D.m + D.mline):
        return None
    for i in X_POINTS:
        others = [j for j in X_POINTS if j != i]
        if D.mi(i) <= 0 and all(D.mij(i, j) <= 0 for j in others):
            terms = [_plane(others)] * D.d
            for j in others:
                terms += [(f"E{j}", x_generator_class(f"E{j}"))] * (D.d - D.mi(j))
            for u, v in itertools.combinations(others, 2):
                terms += [(f"E{u}{v}", x_generator_class(f"E{u}{v}"))] * (D.d - D.mij(u, v))
            terms += [(f"E{i}", x_generator_class(f"E{i}"))] * (-D.mi(i))
            for j in others:
                a, b = sorted((i, j))
                terms += [(f"E{a}{b}", x_generator_class(f"E{a}{b}"))] * (-D.mij(i, j))
            return terms
    return None


def _case_planes(D: XClass) -> tuple:
    """(case label, ordered candidate planes) for one induction step, or
    (label, None) when the negatives decomposition applies instead."""
    d = D.d
    full_pairs = [p for p in X_PAIRS if D.mij(*p) == d]
    if full_pairs:
        i, j = full_pairs[0]
        k, l = (t for t in X_POINTS if t not in (i, j))
        if D.mi(k) == d or D.mi(l) == d:
            return "I.1", None
        # largest of m_ik, m_il, m_jk, m_jl; ties keep this listed order
        cands = sorted([(i, k), (i, l), (j, k), (j, l)], key=lambda p: -D.mij(*p))
        _, b = cands[0]
        return "I.2", [(i, j, b)]
    full_points = [t for t in X_POINTS if D.mi(t) == d]
    if full_points:
        t = full_points[0]
        u1, u2, u3 = sorted((x for x in X_POINTS if x != t), key=lambda x: (D.mi(x), x))
        if D.mij(u2, u3) > 0:
            return "II.1", [(u2, u3, t)]
        if D.mi(u2) == d:
            return "II.2", None
        return "II.2", [(u1, u3, t)]
    good = [i for i in X_POINTS
            if all(c_semi(D, i, j) > 0 for j in X_POINTS if j != i)]
    order = [tuple(x for x in X_POINTS if x != i) for i in X_POINTS]
    first = [order[i - 1] for i in good]
    rest = [p for p in order if p not in first]
    return "III", first + rest


def x_decompose(D: XClass) -> EffCertificate:
    """Certificate for D as a nonnegative sum of L_ijk, E_ij, E_i on X.

    NotEffective means the class is not certified by the criterion; its
    witness is the first failing nef inequality, or "(4) strictness" when all
    of (1)-(9) hold but no induction step applies.
    """
    terms = []
    notes = []
    cur = D
    steps = 0
    while True:
        if cur.is_zero():
            break
        neg = negatives_decomposition(cur)
        if neg is not None:
            terms += neg
            notes.append(f"negatives at degree {cur.d}")
            break
        fail = _first_failure(cur)
        if fail is not None:
            return EffCertificate.not_effective(*fail, notes=notes)
        label, planes = _case_planes(cur)
        chosen = None
        for t in planes or ():
            name, cls = _plane(t)
            nxt = cur - cls
            if _first_failure(nxt) is None:
                chosen = (name, cls)
                break
        if chosen is None:
            _, strict = x_inequalities(cur)
            if not strict:
                return EffCertificate.not_effective("(4) strictness", 0, notes=notes)
            raise AssertionError(f"induction stuck at {cur} (case {label})")
        terms.append(chosen)
        notes.append(f"case {label}: subtract {chosen[0]}")
        cur = cur - chosen[1]
        steps += 1
        assert steps <= D.d, "induction exceeded d steps"
    cert = EffCertificate.effective(terms, notes)
    assert cert.total(XClass.zero()) == D
    return cert
