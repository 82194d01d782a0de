"""Divisor and curve classes on the Kapranov model of M_{0,6}.

The model is P^3 blown up at five points p1..p5 and then at the ten lines
l_ij joining them.  A divisor class is written

    D = d H - sum_i m_i E_i - sum_{i<j} m_ij E_ij

and stored as the integer vector (d; m_1..m_5; m_12..m_45).  Curve classes
use the dual basis (l; e_i; e_ij) with D.l = d, D.e_i = m_i, D.e_ij = m_ij.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

POINTS = (1, 2, 3, 4, 5)
PAIRS = tuple(itertools.combinations(POINTS, 2))
PAIR_INDEX = {}
for _n, (_i, _j) in enumerate(PAIRS):
    PAIR_INDEX[(_i, _j)] = _n
    PAIR_INDEX[(_j, _i)] = _n
TRIPLES = tuple(itertools.combinations(POINTS, 3))


def pair_index(i: int, j: int) -> int:
    try:
        return PAIR_INDEX[(i, j)]
    except KeyError:
        raise ValueError(f"not a pair of distinct points in 1..5: {i},{j}") from None


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


@dataclass(frozen=True)
class DivisorClass:
    """dH - sum m_i E_i - sum m_ij E_ij."""

    d: int
    m: tuple
    mline: tuple

    def __post_init__(self):
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        object.__setattr__(self, "mline", tuple(int(x) for x in self.mline))
        if len(self.m) != 5 or len(self.mline) != 10:
            raise ValueError("a divisor class needs 5 point and 10 line coefficients")

    @classmethod
    def zero(cls) -> DivisorClass:
        return cls(0, (0,) * 5, (0,) * 10)

    @classmethod
    def build(cls, d: int = 0, m: dict | Sequence | None = None,
              mline: dict | None = None) -> DivisorClass:
        """Build from a degree, point multiplicities and a {(i, j): m_ij} map."""
        mm = [0] * 5
        if isinstance(m, dict):
            for i, v in m.items():
                mm[i - 1] = v
        elif m is not None:
            mm = list(m)
        ml = [0] * 10
        for (i, j), v in (mline or {}).items():
            ml[pair_index(i, j)] = v
        return cls(d, tuple(mm), tuple(ml))

    def mi(self, i: int) -> int:
        return self.m[i - 1]

    def mij(self, i: int, j: int) -> int:
        return self.mline[pair_index(i, j)]

    def vector(self) -> tuple:
        return (self.d,) + self.m + self.mline

    @classmethod
    def from_vector(cls, v: Sequence[int]) -> DivisorClass:
        return cls(v[0], tuple(v[1:6]), tuple(v[6:16]))

    def __add__(self, other: DivisorClass) -> DivisorClass:
        return DivisorClass(self.d + other.d, _vec_add(self.m, other.m),
                            _vec_add(self.mline, other.mline))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        return DivisorClass(self.d - other.d, _vec_sub(self.m, other.m),
                            _vec_sub(self.mline, other.mline))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(-self.d, tuple(-x for x in self.m),
                            tuple(-x for x in self.mline))

    def __mul__(self, k: int) -> DivisorClass:
        return DivisorClass(k * self.d, tuple(k * x for x in self.m),
                            tuple(k * x for x in self.mline))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.vector())

    def __str__(self) -> str:
        return format_class(self)


@dataclass(frozen=True)
class CurveClass:
    """cl*l + sum ce_i e_i + sum cline_ij e_ij."""

    cl: int
    ce: tuple
    cline: tuple

    def __post_init__(self):
        object.__setattr__(self, "ce", tuple(int(x) for x in self.ce))
        object.__setattr__(self, "cline", tuple(int(x) for x in self.cline))
        if len(self.ce) != 5 or len(self.cline) != 10:
            raise ValueError("a curve class needs 5 point and 10 line coefficients")

    @classmethod
    def build(cls, cl: int = 0, ce: dict | None = None,
              cline: dict | None = None) -> CurveClass:
        e = [0] * 5
        for i, v in (ce or {}).items():
            e[i - 1] += v
        el = [0] * 10
        for (i, j), v in (cline or {}).items():
            el[pair_index(i, j)] += v
        return cls(cl, tuple(e), tuple(el))

    def __add__(self, other: CurveClass) -> CurveClass:
        return CurveClass(self.cl + other.cl, _vec_add(self.ce, other.ce),
                          _vec_add(self.cline, other.cline))

    def __sub__(self, other: CurveClass) -> CurveClass:
        return CurveClass(self.cl - other.cl, _vec_sub(self.ce, other.ce),
                          _vec_sub(self.cline, other.cline))

    def __mul__(self, k: int) -> CurveClass:
        return CurveClass(k * self.cl, tuple(k * x for x in self.ce),
                          tuple(k * x for x in self.cline))

    __rmul__ = __mul__

    def __str__(self) -> str:
        parts = []
        if self.cl:
            parts.append(f"{self.cl}l")
        for i, c in zip(POINTS, self.ce):
            if c:
                parts.append(f"{c:+d}e{i}")
        for (i, j), c in zip(PAIRS, self.cline):
            if c:
                parts.append(f"{c:+d}e{i}{j}")
        return " ".join(parts) or "0"


def pair(D: DivisorClass, C: CurveClass) -> int:
    """Intersection number D.C."""
    return (D.d * C.cl + sum(a * b for a, b in zip(D.m, C.ce))
            + sum(a * b for a, b in zip(D.mline, C.cline)))


# ---------------------------------------------------------------- generators

KINDS = ("E", "Eij", "L", "Q")


@dataclass(frozen=True, order=True)
class Generator:
    """One of the 40 distinguished divisors.

    kind is "E" (exceptional over a point), "Eij" (over a line), "L" (plane
    through three points) or "Q" (Keel-Vermeire quadric).  For "Q" the index is
    the four points (i, j, k, l) of the pair of pairs {ij, kl}, canonically
    sorted.
    """

    rank: int
    kind: str
    idx: tuple

    @property
    def name(self) -> str:
        if self.kind == "Q":
            i, j, k, l = self.idx
            return f"Q{i}{j}.{k}{l}"
        return ("E" if self.kind != "L" else "L") + "".join(map(str, self.idx))

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Generator({self.name})"


def _kv_key(p: Iterable[int], q: Iterable[int]) -> tuple:
    a, b = sorted((tuple(sorted(p)), tuple(sorted(q))))
    return a + b


def _make_generators() -> tuple:
    out = []
    for i in POINTS:
        out.append(("E", (i,)))
    for p in PAIRS:
        out.append(("Eij", p))
    for t in TRIPLES:
        out.append(("L", t))
    kvs = set()
    for four in itertools.combinations(POINTS, 4):
        a, b, c, e = four
        for p, q in (((a, b), (c, e)), ((a, c), (b, e)), ((a, e), (b, c))):
            kvs.add(_kv_key(p, q))
    for k in sorted(kvs):
        out.append(("Q", k))
    return tuple(Generator(n, kind, idx) for n, (kind, idx) in enumerate(out))


GENERATORS = _make_generators()
_BY_KEY = {(g.kind, g.idx): g for g in GENERATORS}
_BY_NAME = {g.name: g for g in GENERATORS}


def generator(kind: str, *idx) -> Generator:
    """Look up a generator by kind and (any ordering of) its indices."""
    if kind == "Q":
        if len(idx) == 2:
            key = _kv_key(idx[0], idx[1])
        else:
            key = _kv_key(idx[:2], idx[2:])
    else:
        key = tuple(sorted(idx))
    try:
        return _BY_KEY[(kind, key)]
    except KeyError:
        raise ValueError(f"no generator {kind}{idx}") from None


def generator_by_name(name: str) -> Generator:
    name = name.strip()
    if name in _BY_NAME:
        return _BY_NAME[name]
    m = re.fullmatch(r"Q(\d)(\d)\.(\d)(\d)", name)
    if m:
        a, b, c, e = map(int, m.groups())
        if len({a, b, c, e}) == 4 and {a, b, c, e} <= set(POINTS):
            return generator("Q", (a, b), (c, e))
    m = re.fullmatch(r"([EL])(\d+)", name)
    if m:
        digits = tuple(int(c) for c in m.group(2))
        kind = {("E", 1): "E", ("E", 2): "Eij", ("L", 3): "L"}.get((m.group(1), len(digits)))
        if kind and len(set(digits)) == len(digits):
            try:
                return generator(kind, *digits)
            except ValueError:
                pass
    raise ValueError(f"unknown generator name {name!r}")


def generator_class(g: Generator) -> DivisorClass:
    m = [0] * 5
    ml = [0] * 10
    if g.kind == "E":
        m[g.idx[0] - 1] = -1
        return DivisorClass(0, m, ml)
    if g.kind == "Eij":
        ml[pair_index(*g.idx)] = -1
        return DivisorClass(0, m, ml)
    if g.kind == "L":
        for i in g.idx:
            m[i - 1] = 1
        for i, j in itertools.combinations(g.idx, 2):
            ml[pair_index(i, j)] = 1
        return DivisorClass(1, m, ml)
    i, j, k, l = g.idx
    m = [1] * 5
    for a, b in ((i, k), (i, l), (j, k), (j, l)):
        ml[pair_index(a, b)] = 1
    return DivisorClass(2, m, ml)


_CLASS_CACHE = {g: generator_class(g) for g in GENERATORS}


def gclass(g: Generator) -> DivisorClass:
    """Cached generator_class."""
    return _CLASS_CACHE[g]


def class_of(exponents: dict) -> DivisorClass:
    """Class of a monomial given as {Generator: exponent}."""
    v = [0] * 16
    for g, n in exponents.items():
        if n:
            for t, x in enumerate(_CLASS_CACHE[g].vector()):
                v[t] += n * x
    return DivisorClass.from_vector(v)


def boundary_class(S: Iterable[int]) -> DivisorClass:
    """Class of the boundary divisor Delta_S, S a subset of {1..6}."""
    S = set(S)
    if not S <= {1, 2, 3, 4, 5, 6}:
        raise ValueError("boundary indices must lie in 1..6")
    if 6 not in S:
        S = {1, 2, 3, 4, 5, 6} - S
    rest = sorted(S - {6})
    if len(rest) == 1:
        return gclass(generator("E", *rest))
    if len(rest) == 2:
        return gclass(generator("Eij", *rest))
    if len(rest) == 3:
        return gclass(generator("L", *rest))
    raise ValueError(f"boundary divisors need |S| in {{2,3}} up to complement, got {sorted(S)}")


def boundary_sets() -> list:
    """The 25 boundary index sets, one representative each (6 not in S unless |S|=2)."""
    out = [frozenset((i, 6)) for i in POINTS]
    out += [frozenset((i, j, 6)) for i, j in PAIRS]
    out += [frozenset(p) for p in PAIRS]
    return out


# -------------------------------------------------------------- permutations

@dataclass(frozen=True)
class Perm5:
    """Permutation of {1..5}; images[i-1] is the image of i."""

    images: tuple

    def __post_init__(self):
        if sorted(self.images) != list(POINTS):
            raise ValueError(f"not a permutation of 1..5: {self.images}")

    @classmethod
    def identity(cls) -> Perm5:
        return cls(POINTS)

    @classmethod
    def transposition(cls, a: int, b: int) -> Perm5:
        im = list(POINTS)
        im[a - 1], im[b - 1] = b, a
        return cls(tuple(im))

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: Perm5) -> Perm5:
        """self after other."""
        return Perm5(tuple(self(other(i)) for i in POINTS))

    def inverse(self) -> Perm5:
        inv = [0] * 5
        for i, s in zip(POINTS, self.images):
            inv[s - 1] = i
        return Perm5(tuple(inv))

    def is_identity(self) -> bool:
        return self.images == POINTS


ALL_PERMS = tuple(Perm5(p) for p in itertools.permutations(POINTS))


def apply_perm(s: Perm5, D):
    """Relabel point i as s(i) in a divisor class, curve class or generator."""
    if isinstance(D, DivisorClass):
        m = [0] * 5
        ml = [0] * 10
        for i in POINTS:
            m[s(i) - 1] = D.m[i - 1]
        for n, (i, j) in enumerate(PAIRS):
            ml[pair_index(s(i), s(j))] = D.mline[n]
        return DivisorClass(D.d, m, ml)
    if isinstance(D, CurveClass):
        e = [0] * 5
        el = [0] * 10
        for i in POINTS:
            e[s(i) - 1] = D.ce[i - 1]
        for n, (i, j) in enumerate(PAIRS):
            el[pair_index(s(i), s(j))] = D.cline[n]
        return CurveClass(D.cl, e, el)
    if isinstance(D, Generator):
        im = tuple(s(i) for i in D.idx)
        if D.kind == "Q":
            return generator("Q", im[:2], im[2:])
        return generator(D.kind, *im)
    raise TypeError(f"cannot permute {type(D).__name__}")


def _is_normal(D: DivisorClass) -> bool:
    m5 = D.m[4]
    if any(m5 > x for x in D.m[:4]):
        return False
    if len(set(D.m)) == 1:
        top = max(D.mline)
        return any(D.mij(i, 5) == top for i in range(1, 5))
    return True


def normalize(D: DivisorClass) -> tuple:
    """Return (s, apply_perm(s, D)) with m_5 minimal and, when all m_i agree,
    the largest m_ij attained at a pair containing 5.

    The lexicographically smallest qualifying image tuple is chosen.
    """
    for s in ALL_PERMS:
        E = apply_perm(s, D)
        if _is_normal(E):
            return s, E
    raise AssertionError("no normalizing permutation")  # pragma: no cover


# ------------------------------------------------------------ special curves

def _others(*used: int, universe=(1, 2, 3, 4)) -> tuple:
    return tuple(i for i in universe if i not in used)


def _check(indices, n, universe=(1, 2, 3, 4)):
    if len(indices) != n or len(set(indices)) != n or not set(indices) <= set(universe):
        raise ValueError(f"expected {n} distinct indices in {universe}, got {indices}")


CHI = {}
for _p, _a in (((1, 3), "x"), ((2, 4), "x"), ((1, 4), "y"), ((2, 3), "y"),
               ((1, 2), "z"), ((3, 4), "z")):
    CHI[_p] = CHI[_p[::-1]] = _a
ALPHAS = ("x", "y", "z")
ALPHA_PAIRS = {"x": ((1, 3), (2, 4)), "y": ((1, 4), (2, 3)), "z": ((1, 2), (3, 4))}


def chi(i: int, j: int) -> str:
    """The diagonal point of the quadrilateral q1..q4 attached to pair ij."""
    try:
        return CHI[(i, j)]
    except KeyError:
        raise ValueError(f"chi needs a pair in 1..4, got {i},{j}") from None


def special_curve(kind: str, *idx) -> CurveClass:
    """Named curve classes.

    kinds: l, e (i), eij (i, j), C (general cubic), L (alpha in x/y/z),
    Cij (i, j), Ci;j (i, j), Ci (i), B, Bi (i).  Indices for the X-curves
    lie in 1..4; k, l denote the two remaining indices.
    """
    b = CurveClass.build
    if kind == "l":
        return b(1)
    if kind == "e":
        _check(idx, 1, POINTS)
        return b(0, {idx[0]: 1})
    if kind == "eij":
        _check(idx, 2, POINTS)
        return b(0, cline={idx: 1})
    if kind == "C":
        return b(3, {i: -1 for i in POINTS})
    if kind == "L":
        if len(idx) != 1 or idx[0] not in ALPHA_PAIRS:
            raise ValueError("L needs one of x, y, z")
        p, q = ALPHA_PAIRS[idx[0]]
        return b(1, {5: -1}, {p: -1, q: -1})
    if kind == "Cij":
        _check(idx, 2)
        i, j = idx
        k, l = _others(i, j)
        return b(2, {k: -1, l: -1}, {(i, j): -1})
    if kind == "Ci;j":
        _check(idx, 2)
        i, j = idx
        k, l = _others(i, j)
        return b(2, {j: -1}, {(i, k): -1, (i, l): -1})
    if kind == "Ci":
        _check(idx, 1)
        i = idx[0]
        return b(2, cline={(i, j): -1 for j in _others(i)})
    if kind == "B":
        return b(3, {i: -1 for i in (1, 2, 3, 4)})
    if kind == "Bi":
        _check(idx, 1)
        i = idx[0]
        j, k, l = _others(i)
        return b(3, {i: -2}, {(j, k): -1, (j, l): -1, (k, l): -1})
    raise ValueError(f"unknown curve kind {kind!r}")


CURVE_C = special_curve("C")
L_CURVES = {a: special_curve("L", a) for a in ALPHAS}


def m_alpha(D: DivisorClass, alpha: str) -> int:
    return max(0, -pair(D, L_CURVES[alpha]))


# ----------------------------------------------------------------- text I/O

_INT = r"\s*-?\d+\s*"
_CLASS_RE = re.compile(rf"^{_INT};({_INT},){{4}}{_INT};({_INT},){{9}}{_INT}$")


def format_class(D: DivisorClass) -> str:
    return (f"{D.d};" + ",".join(map(str, D.m)) + ";"
            + ",".join(map(str, D.mline)))


def parse_class(text: str) -> DivisorClass:
    """Parse 'd; m1,..,m5; m12,..,m45'."""
    if not _CLASS_RE.match(text):
        raise ValueError(f"bad class string {text!r}")
    d, m, ml = text.split(";")
    return DivisorClass(int(d), [int(x) for x in m.split(",")],
                        [int(x) for x in ml.split(",")])


def parse_class_expr(text: str) -> DivisorClass:
    """Parse a class string, or a +/- combination of generator names with
    optional integer multipliers, e.g. 'L123 + 2E1 - E12'."""
    text = text.strip()
    if ";" in text:
        return parse_class(text)
    tokens = re.findall(r"([+-]?)\s*(\d*)\s*\*?\s*([A-Za-z][\w.]*)", text)
    if not tokens or re.sub(r"[+-]?\s*\d*\s*\*?\s*[A-Za-z][\w.]*", "", text).strip():
        raise ValueError(f"bad class expression {text!r}")
    out = DivisorClass.zero()
    for sign, mult, name in tokens:
        if name == "H":
            cls = DivisorClass(1, (0,) * 5, (0,) * 10)
        else:
            cls = gclass(generator_by_name(name))
        k = int(mult) if mult else 1
        out = out + (-k if sign == "-" else k) * cls
    return out


def iter_generator_sums(max_total: int) -> Iterator[tuple]:
    """Multisets of generators of size 1..max_total as sorted tuples."""
    for n in range(1, max_total + 1):
        yield from itertools.combinations_with_replacement(GENERATORS, n)


# ---------------------------------------------------------------- monomials

@dataclass(frozen=True)
class Monomial:
    """A product of distinguished sections, stored as sorted (generator, exponent) pairs."""

    exps: tuple = ()

    def __post_init__(self):
        merged: dict = {}
        for g, n in self.exps:
            if n < 0:
                raise ValueError("negative exponent in a monomial")
            merged[g] = merged.get(g, 0) + n
        object.__setattr__(self, "exps", tuple(sorted((g, n) for g, n in merged.items() if n)))

    @classmethod
    def of(cls, mapping: dict) -> Monomial:
        return cls(tuple(mapping.items()))

    def as_dict(self) -> dict:
        return dict(self.exps)

    def cls(self) -> DivisorClass:
        return class_of(self.as_dict())

    def degree(self) -> int:
        return self.cls().d

    def __mul__(self, other: Monomial) -> Monomial:
        return Monomial(self.exps + other.exps)

    def __str__(self) -> str:
        if not self.exps:
            return "1"
        return "*".join(g.name + (f"^{n}" if n > 1 else "") for g, n in self.exps)

    @classmethod
    def parse(cls, text: str) -> Monomial:
        text = text.strip()
        if text in ("", "1"):
            return cls()
        out = []
        for part in text.split("*"):
            name, _, power = part.partition("^")
            out.append((generator_by_name(name), int(power) if power else 1))
        return cls(tuple(out))
