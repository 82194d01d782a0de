"""Lifting distinguished sections from E_5 (Case I) or from Y (Case II).

A section on E_5 = Bl_4 P^2 is a monomial in s_ij (the lines q_i q_j) and
the exceptional sections s_i.  On Y, the further blow-up at the diagonal
points x, y, z, the lines become s'_ij and the diagonal triangle contributes
s_yz, s_xz, s_xy with exponents c_x, c_y, c_z.

Each monomial lifts to a monomial on M_0,6 of class D'.  It lifts
"straightforwardly" when D - D' is effective on X; the criteria below decide
this, and the rewriting engines replace an offending monomial by an exact
linear combination of monomials that do lift.  Polynomial identities are
checked on P^2 with every exceptional section set to 1.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import geometry as geo
from .lattice import (ALPHA_PAIRS, ALPHAS, CURVE_C, L_CURVES, DivisorClass, Monomial,
                      generator, generator_by_name, gclass, m_alpha, normalize, pair, special_curve, chi)
from .oracle import h0_p3
from .restriction import first_violation
from .x_cone import X_PAIRS, XClass

_PI = {}
for _n, (_a, _b) in enumerate(X_PAIRS):
    _PI[(_a, _b)] = _PI[(_b, _a)] = _n
_AI = {a: n for n, a in enumerate(ALPHAS)}

CASE_I = "CaseI"
CASE_II = "CaseII"


def _others(*used) -> tuple:
    return tuple(t for t in (1, 2, 3, 4) if t not in used)


def _orderings():
    """(i, j, k, l) with i < j and (k, l) both orders of the complement."""
    for i, j in X_PAIRS:
        k, l = _others(i, j)
        yield i, j, k, l
        yield i, j, l, k


def _sp(i, j):
    return (i, j) if i < j else (j, i)


def _c_line_ends(alpha: str) -> tuple:
    """c_alpha is the exponent of the line through the two other diagonal points."""
    return tuple(b for b in ALPHAS if b != alpha)


# ------------------------------------------------------------ exponent data


@dataclass(frozen=True, order=True)
class ExpE5:
    """Exponents of prod s_ij^a_ij prod s_i^l_i; a in the order 12,13,14,23,24,34."""

    a: tuple = (0,) * 6
    l: tuple = (0,) * 4

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        object.__setattr__(self, "l", tuple(int(x) for x in self.l))
        if len(self.a) != 6 or len(self.l) != 4:
            raise ValueError("ExpE5 needs 6 pair and 4 point exponents")
        if min(self.a + self.l) < 0:
            raise ValueError("exponents must be nonnegative")

    def aij(self, i, j) -> int:
        return self.a[_PI[(i, j)]]

    def li(self, i) -> int:
        return self.l[i - 1]

    @classmethod
    def build(cls, a: dict | None = None, l=None) -> ExpE5:
        av = [0] * 6
        for p, v in (a or {}).items():
            av[_PI[tuple(p)]] = v
        return cls(tuple(av), tuple(l or (0,) * 4))

    def to_dict(self) -> dict:
        out = {f"a{i}{j}": self.aij(i, j) for i, j in X_PAIRS}
        out.update({f"l{i}": self.li(i) for i in (1, 2, 3, 4)})
        return out

    def __str__(self) -> str:
        parts = [f"s{i}{j}^{self.aij(i, j)}" for i, j in X_PAIRS if self.aij(i, j)]
        parts += [f"s{i}^{self.li(i)}" for i in (1, 2, 3, 4) if self.li(i)]
        return "*".join(parts) or "1"


@dataclass(frozen=True, order=True)
class ExpY:
    """Exponents on Y: a (s'_ij), l (s_i), c = (c_x, c_y, c_z) for s_yz, s_xz, s_xy,
    and lxyz for the exceptional sections s_x, s_y, s_z."""

    a: tuple = (0,) * 6
    l: tuple = (0,) * 4
    c: tuple = (0,) * 3
    lxyz: tuple = (0,) * 3

    def __post_init__(self):
        for name, n in (("a", 6), ("l", 4), ("c", 3), ("lxyz", 3)):
            v = tuple(int(x) for x in getattr(self, name))
            if len(v) != n:
                raise ValueError(f"ExpY.{name} needs {n} entries")
            if min(v) < 0:
                raise ValueError("exponents must be nonnegative")
            object.__setattr__(self, name, v)

    def aij(self, i, j) -> int:
        return self.a[_PI[(i, j)]]

    def li(self, i) -> int:
        return self.l[i - 1]

    def ca(self, alpha) -> int:
        return self.c[_AI[alpha]]

    def la(self, alpha) -> int:
        return self.lxyz[_AI[alpha]]

    @classmethod
    def build(cls, a: dict | None = None, l=None, c=None, lxyz=None) -> ExpY:
        av = [0] * 6
        for p, v in (a or {}).items():
            av[_PI[tuple(p)]] = v

        def vec(x, n):
            if isinstance(x, dict):
                return tuple(x.get(al, 0) for al in ALPHAS)
            return tuple(x or (0,) * n)
        return cls(tuple(av), tuple(l or (0,) * 4), vec(c, 3), vec(lxyz, 3))

    def to_dict(self) -> dict:
        out = {f"a{i}{j}": self.aij(i, j) for i, j in X_PAIRS}
        out.update({f"l{i}": self.li(i) for i in (1, 2, 3, 4)})
        out.update({f"c{al}": self.ca(al) for al in ALPHAS})
        out.update({f"l{al}": self.la(al) for al in ALPHAS})
        return out

    def __str__(self) -> str:
        parts = [f"s'{i}{j}^{self.aij(i, j)}" for i, j in X_PAIRS if self.aij(i, j)]
        parts += [f"s{i}^{self.li(i)}" for i in (1, 2, 3, 4) if self.li(i)]
        for al in ALPHAS:
            if self.ca(al):
                u, v = _c_line_ends(al)
                parts.append(f"s{u}{v}^{self.ca(al)}")
        parts += [f"s{al}^{self.la(al)}" for al in ALPHAS if self.la(al)]
        return "*".join(parts) or "1"


def _shift(e, delta: dict):
    """Apply exponent changes {("a", (i, j)) | ("l", i) | ("c", al) | ("lx", al): n}.
    Changes to c or lx are ignored for ExpE5."""
    a, l = list(e.a), list(e.l)
    is_y = isinstance(e, ExpY)
    c = list(e.c) if is_y else None
    lx = list(e.lxyz) if is_y else None
    for (kind, key), n in delta.items():
        if kind == "a":
            a[_PI[key]] += n
        elif kind == "l":
            l[key - 1] += n
        elif is_y and kind == "c":
            c[_AI[key]] += n
        elif is_y and kind == "lx":
            lx[_AI[key]] += n
    if is_y:
        return ExpY(a, l, c, lx)
    return ExpE5(a, l)


# --------------------------------------------------------------- membership


def case_split(D: DivisorClass) -> str:
    """CaseI when D.L_x, D.L_y, D.L_z are all >= 0, else CaseII."""
    if all(pair(D, L_CURVES[al]) >= 0 for al in ALPHAS):
        return CASE_I
    return CASE_II


def m_alphas(D: DivisorClass) -> dict:
    return {al: m_alpha(D, al) for al in ALPHAS}


def e5_membership(D: DivisorClass, e: ExpE5) -> list:
    """Failed membership equations for e in H^0(E_5, D restricted); empty when valid."""
    bad = []
    if sum(e.a) != D.mi(5):
        bad.append(f"sum a = {sum(e.a)} != D.e5 = {D.mi(5)}")
    for i in (1, 2, 3, 4):
        lhs = sum(e.aij(i, j) for j in _others(i)) - e.li(i)
        if lhs != D.mij(i, 5):
            bad.append(f"row {i}: {lhs} != D.e{i}5 = {D.mij(i, 5)}")
    return bad


def y_membership(D: DivisorClass, e: ExpY) -> list:
    """Failed membership equations for e in H^0(Y, D^Y); empty when valid."""
    bad = []
    if sum(e.a) + sum(e.c) != D.mi(5):
        bad.append(f"sum a + sum c = {sum(e.a) + sum(e.c)} != D.e5 = {D.mi(5)}")
    for i in (1, 2, 3, 4):
        lhs = sum(e.aij(i, j) for j in _others(i)) - e.li(i)
        if lhs != D.mij(i, 5):
            bad.append(f"row {i}: {lhs} != D.e{i}5 = {D.mij(i, 5)}")
    ms = m_alphas(D)
    for al in ALPHAS:
        p, q = ALPHA_PAIRS[al]
        lhs = (e.aij(*p) + e.aij(*q) + sum(e.ca(b) for b in ALPHAS if b != al) - e.la(al))
        if lhs != ms[al]:
            bad.append(f"{al}: {lhs} != m_{al} = {ms[al]}")
    return bad


def _require(bad: list):
    if bad:
        raise ValueError("exponents are not a section of the restricted class: " + "; ".join(bad))


def _bar_is_zero(D: DivisorClass) -> bool:
    return D.mi(5) == 0 and all(D.mij(i, 5) == 0 for i in (1, 2, 3, 4))


def iter_exp_e5(D: DivisorClass):
    """Every membership-valid ExpE5 for D (finite: sum a = D.e5)."""
    n = D.mi(5)
    if n < 0:
        return
    for a in _compositions(n, 6):
        l = [sum(a[_PI[(i, j)]] for j in _others(i)) - D.mij(i, 5) for i in (1, 2, 3, 4)]
        if min(l) >= 0:
            yield ExpE5(a, l)


def iter_exp_y(D: DivisorClass):
    """Every membership-valid ExpY for D^Y."""
    n = D.mi(5)
    if n < 0:
        return
    ms = m_alphas(D)
    for v in _compositions(n, 9):
        a, c = v[:6], v[6:]
        l = [sum(a[_PI[(i, j)]] for j in _others(i)) - D.mij(i, 5) for i in (1, 2, 3, 4)]
        if min(l) < 0:
            continue
        lx = []
        for al in ALPHAS:
            p, q = ALPHA_PAIRS[al]
            lx.append(a[_PI[p]] + a[_PI[q]]
                      + sum(c[_AI[b]] for b in ALPHAS if b != al) - ms[al])
        if min(lx) >= 0:
            yield ExpY(a, l, c, lx)


def _compositions(total: int, parts: int):
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        out = []
        for cpos in cuts:
            out.append(cpos - prev - 1)
            prev = cpos
        out.append(total + parts - 2 - prev)
        yield tuple(out)


# ----------------------------------------------------------------- criteria


def _c_semi_e5(D, k, l) -> int:
    """D.(C_{k;l} - e_5)."""
    return pair(D, special_curve("Ci;j", k, l)) - D.mi(5)


def lift_I_slacks(D: DivisorClass, e: ExpE5) -> dict:
    """{"a_ij<=D.(C_k;l-e5)": slack} over all twelve index choices."""
    return {f"a{i}{j}<=D.(C{k};{l}-e5)": _c_semi_e5(D, k, l) - e.aij(i, j)
            for i, j, k, l in _orderings()}


def lift_I_criterion(D: DivisorClass, e: ExpE5) -> bool:
    _require(e5_membership(D, e))
    if _bar_is_zero(D):
        return True
    return all(v >= 0 for v in lift_I_slacks(D, e).values())


def lift_II_slacks(D: DivisorClass, e: ExpY) -> dict:
    """Slacks of the five families (i)-(v), keyed by family and instance."""
    out = {}
    l_ = special_curve("l")
    for i, j in X_PAIRS:
        rhs = pair(D, l_ - special_curve("eij", i, j)) - D.mi(5)
        out[f"(i) {i}{j}"] = rhs - (e.ca(chi(i, j)) - e.aij(i, j))
    for al in ALPHAS:
        rhs = m_alpha(D, al) + pair(D, L_CURVES[al])
        out[f"(ii) {al}"] = rhs - (e.ca(al) - e.la(al))
    for i, j in X_PAIRS:
        k, l = _others(i, j)
        rhs = pair(D, special_curve("Cij", k, l)) - D.mi(5)
        out[f"(iii) {i}{j}"] = rhs - (e.ca(chi(i, j)) - e.aij(i, j))
    for i, j, k, l in _orderings():
        lhs = e.aij(i, j) + sum(e.ca(b) for b in ALPHAS if b != chi(i, j))
        out[f"(iv) {i}{j};{k}{l}"] = _c_semi_e5(D, k, l) - lhs
    out["(v)"] = pair(D, CURVE_C) - sum(e.c)
    return out


def lift_II_criterion(D: DivisorClass, e: ExpY) -> bool:
    _require(y_membership(D, e))
    return all(v >= 0 for v in lift_II_slacks(D, e).values())


# ------------------------------------------------------------------- lifts


@dataclass(frozen=True)
class LiftResult:
    Dprime: DivisorClass
    delta: XClass
    monomial: Monomial

    def to_dict(self) -> dict:
        return {"Dprime": str(self.Dprime), "delta": str(self.delta),
                "monomial": str(self.monomial)}


def _finish_lift(D: DivisorClass, mono: dict) -> LiftResult:
    mon = Monomial.of(mono)
    Dp = mon.cls()
    rest = D - Dp
    if rest.mi(5) or any(rest.mij(i, 5) for i in (1, 2, 3, 4)):
        raise ValueError(f"difference {rest} has coefficients over p5; lift inconsistent")
    return LiftResult(Dp, XClass.from_divisor(rest), mon)


def _lift_monomial_a_l(e) -> dict:
    mono = {}
    for i, j in X_PAIRS:
        if e.aij(i, j):
            mono[generator("L", i, j, 5)] = e.aij(i, j)
    for i in (1, 2, 3, 4):
        if e.li(i):
            mono[generator("Eij", i, 5)] = e.li(i)
    return mono


def delta_I(D: DivisorClass, e: ExpE5) -> LiftResult:
    """Lift s_ij -> x_ij5 and s_i -> x_i5; delta = D - D' on X."""
    _require(e5_membership(D, e))
    return _finish_lift(D, _lift_monomial_a_l(e))


Q_OF_ALPHA = {al: generator("Q", *ALPHA_PAIRS[al]) for al in ALPHAS}


def delta_II(D: DivisorClass, e: ExpY) -> LiftResult:
    """Lift s'_ij -> x_ij5, s_i -> x_i5 and the diagonal lines to the quadrics."""
    _require(y_membership(D, e))
    ms = m_alphas(D)
    for al in ALPHAS:
        p, q = ALPHA_PAIRS[al]
        need = e.aij(*p) + e.aij(*q) + sum(e.ca(b) for b in ALPHAS if b != al)
        if ms[al] + e.la(al) != need:
            raise ValueError(f"not enough s_{al}: {ms[al]} + {e.la(al)} != {need}")
    mono = _lift_monomial_a_l(e)
    for al in ALPHAS:
        if e.ca(al):
            mono[Q_OF_ALPHA[al]] = e.ca(al)
    return _finish_lift(D, mono)


# --------------------------------------------------------- section algebra


@dataclass(frozen=True)
class SectionExpr:
    """A rational linear combination of exponent data of one class."""

    terms: tuple = ()
    moves: int = 0
    depth: int = 0
    log: tuple = field(default=(), compare=False)

    @classmethod
    def single(cls, e) -> SectionExpr:
        return cls(((Fraction(1), e),))

    @classmethod
    def from_dict(cls, d: dict, moves=0, log=(), depth=0) -> SectionExpr:
        terms = tuple(sorted(((c, e) for e, c in d.items() if c), key=lambda t: t[1]))
        return cls(terms, moves, depth, tuple(log))

    def exps(self) -> list:
        return [e for _, e in self.terms]

    def __call__(self, point) -> Fraction:
        return sum((c * section_value(e, point) for c, e in self.terms), Fraction(0))

    def to_list(self) -> list:
        return [[str(c), e.to_dict()] for c, e in self.terms]

    def __str__(self) -> str:
        return " + ".join(f"({c})*{e}" for c, e in self.terms) or "0"


def _line(i, j):
    return geo.q_line(*_sp(i, j))


def _c_line(alpha):
    return geo.surface_line(*_c_line_ends(alpha))


def section_value(e, point) -> Fraction:
    """Value at a point of P^2 of the form of e, exceptional sections set to 1."""
    v = Fraction(1)
    for i, j in X_PAIRS:
        n = e.aij(i, j)
        if n:
            v *= _line(i, j)(point) ** n
    if isinstance(e, ExpY):
        for al in ALPHAS:
            if e.ca(al):
                v *= _c_line(al)(point) ** e.ca(al)
    return v


@lru_cache(maxsize=1)
def evaluation_points(count: int = 25) -> tuple:
    rng = random.Random(20061)
    pts = []
    while len(pts) < count:
        p = (Fraction(rng.randint(-40, 40), rng.randint(1, 13)),
             Fraction(rng.randint(-40, 40), rng.randint(1, 13)), Fraction(1))
        if p not in pts:
            pts.append(p)
    return tuple(pts)


def identity_holds(e, expr: SectionExpr, points=None) -> bool:
    """Exact equality of the single monomial e and expr at the evaluation points."""
    for p in points or evaluation_points():
        if section_value(e, p) != expr(p):
            return False
    return True


@lru_cache(maxsize=None)
def _pencil(f_key, g_key, h_key) -> tuple:
    return geo.pencil_coefficients(_form(f_key), _form(g_key), _form(h_key))


def _form(key):
    """key is a tuple of line labels ("q", i, j) or ("c", alpha); the form is their product."""
    out = None
    for lab in key:
        f = _line(lab[1], lab[2]) if lab[0] == "q" else _c_line(lab[1])
        out = f if out is None else out * f
    return out


def _q(i, j):
    return ("q",) + _sp(i, j)


# -------------------------------------------------------------------- moves
#
# A move returns (removed delta, [(coef, added delta), ...]) with the
# coefficients solved from the fixed coordinates.


def _move_step1(e, i, j):
    """s_ij s_i -> pencil through q_j: s_jk s_k, s_jl s_l."""
    k, l = _others(i, j)
    lam, mu = _pencil((_q(i, j),), (_q(j, k),), (_q(j, l),))
    removed = {("a", _sp(i, j)): -1, ("l", i): -1, ("lx", chi(i, j)): -1}
    adds = []
    for coef, t in ((lam, k), (mu, l)):
        adds.append((coef, {("a", _sp(j, t)): 1, ("l", t): 1, ("lx", chi(j, t)): 1}))
    return removed, adds


def _move_step2(e, i, j):
    """s_ij s_kl -> s_ik s_jl, s_il s_jk."""
    k, l = _others(i, j)
    lam, mu = _pencil((_q(i, j), _q(k, l)), (_q(i, k), _q(j, l)), (_q(i, l), _q(j, k)))
    removed = {("a", _sp(i, j)): -1, ("a", _sp(k, l)): -1, ("lx", chi(i, j)): -2}
    adds = [(lam, {("a", _sp(i, k)): 1, ("a", _sp(j, l)): 1, ("lx", chi(i, k)): 2}),
            (mu, {("a", _sp(i, l)): 1, ("a", _sp(j, k)): 1, ("lx", chi(i, l)): 2})]
    return removed, adds


def _move_reducible(e, alpha, beta):
    """s_(line of c_beta) s_alpha -> pencil through gamma: s'_ij s_i s_j with chi(ij) = gamma."""
    (gamma,) = (g for g in ALPHAS if g not in (alpha, beta))
    p, q = ALPHA_PAIRS[gamma]
    lam, mu = _pencil((("c", beta),), (_q(*p),), (_q(*q),))
    removed = {("c", beta): -1, ("lx", alpha): -1}
    adds = [(coef, {("a", t): 1, ("l", t[0]): 1, ("l", t[1]): 1}) for coef, t in ((lam, p), (mu, q))]
    return removed, adds


def _move_case_c(e, alpha, i, j):
    """s'_ij s_(line of c_alpha) s_alpha -> s'_ik s'_jk s_k^2 for k outside ij."""
    k, l = _others(i, j)
    lam, mu = _pencil((_q(i, j), ("c", alpha)), (_q(i, k), _q(j, k)), (_q(i, l), _q(j, l)))
    removed = {("a", _sp(i, j)): -1, ("c", alpha): -1, ("lx", alpha): -1}
    adds = [(coef, {("a", _sp(i, t)): 1, ("a", _sp(j, t)): 1, ("l", t): 2})
            for coef, t in ((lam, k), (mu, l))]
    return removed, adds


def _apply(e, move):
    removed, adds = move
    base = _shift(e, removed)
    return [(coef, _shift(base, add)) for coef, add in adds if coef]


# ------------------------------------------------------------ Case I engine


def _pair_excess(D, e) -> dict:
    """{(i, j): a_ij - min_{k,l} D.(C_k;l - e5)} for pairs that violate."""
    out = {}
    for i, j in X_PAIRS:
        k, l = _others(i, j)
        bound = min(_c_semi_e5(D, k, l), _c_semi_e5(D, l, k))
        if e.aij(i, j) > bound:
            out[(i, j)] = e.aij(i, j) - bound
    return out


def _variant_I(D, e) -> int:
    return sum(_pair_excess(D, e).values())


def _case_i_move(D, e, log):
    """One Step 1 / Step 2 replacement on the worst violating pair."""
    exc = _pair_excess(D, e)
    (i, j), _ = max(exc.items(), key=lambda kv: (kv[1], -X_PAIRS.index(kv[0])))
    k, l = _others(i, j)
    if e.li(i) + e.li(j) > 0:
        pivot_from = i if e.li(i) > 0 else j
        other = j if pivot_from == i else i
        log.append(f"step 1 on a{i}{j} using s{pivot_from}")
        return _move_step1(e, pivot_from, other)
    if e.aij(k, l) > 0:
        log.append(f"step 2 on a{i}{j}, a{k}{l}")
        return _move_step2(e, i, j)
    raise AssertionError(f"positivity fails for a{i}{j} in {e}")


def _run(D, e, crit, choose, variant, bound, member):
    """Worklist rewriting shared by both cases."""
    pending = {e: Fraction(1)}
    depth = {e: 0}
    done: dict = {}
    log: list = []
    moves = deepest = 0
    while pending:
        cur = min(pending)
        coef = pending.pop(cur)
        d0 = depth.pop(cur)
        if not coef:
            continue
        if crit(D, cur):
            done[cur] = done.get(cur, 0) + coef
            continue
        if d0 >= bound:
            raise RuntimeError(f"rewriting exceeded {bound} moves at {cur}")
        move = choose(D, cur, log)
        v0 = variant(D, cur)
        for c, new in _apply(cur, move):
            _require(member(D, new))
            if variant(D, new) >= v0:
                raise AssertionError(f"loop variant did not drop: {cur} -> {new}")
            pending[new] = pending.get(new, 0) + coef * c
            depth[new] = max(depth.get(new, 0), d0 + 1)
            deepest = max(deepest, d0 + 1)
        moves += 1
    return SectionExpr.from_dict(done, moves, log, deepest)


def rewrite_I(D: DivisorClass, e: ExpE5) -> SectionExpr:
    """Rewrite a section on E_5 as a combination of sections passing lift_I_criterion."""
    _require(e5_membership(D, e))
    bound = 6 * (sum(e.a) + sum(e.l))
    return _run(D, e, lift_I_criterion, _case_i_move, _variant_I, bound, e5_membership)


# ----------------------------------------------------------- Case II engine


def classify_case(e: ExpY) -> tuple:
    """("Reducible", alpha, beta), ("A",), ("B",) or ("C", alpha)."""
    for al in ALPHAS:
        if e.la(al) > 0:
            for be in ALPHAS:
                if be != al and e.ca(be) > 0:
                    return ("Reducible", al, be)
    if not any(e.c):
        return ("A",)
    if not any(e.lxyz):
        return ("B",)
    (al,) = (a for a in ALPHAS if e.ca(a) > 0)
    return ("C", al)


def _case_c_excess(D, e, alpha) -> dict:
    """Violations of the two Case C conditions for the pairs with chi = alpha."""
    K = pair(D, special_curve("l") * 2) - D.mi(5) - sum(
        D.mij(*p) for b in ALPHAS if b != alpha for p in ALPHA_PAIRS[b])
    out = {}
    for i, j in ALPHA_PAIRS[alpha]:
        k, l = _others(i, j)
        b_iv = min(_c_semi_e5(D, k, l), _c_semi_e5(D, l, k))
        b_iii = pair(D, special_curve("Cij", i, j)) - D.mi(5) + K
        exc = e.aij(i, j) - min(b_iv, b_iii)
        if exc > 0:
            out[(i, j)] = exc
    return out


def _variant_II(D, e) -> int:
    """Lexicographic (sum c + sum l_alpha, Case I excess) folded into one integer."""
    return (sum(e.c) + sum(e.lxyz)) * (D.mi(5) + 1) * 7 + _variant_I(D, e)


def _case_ii_move(D, e, log):
    kind = classify_case(e)
    if kind[0] == "Reducible":
        _, al, be = kind
        log.append(f"replacement s_{''.join(_c_line_ends(be))} s_{al}")
        return _move_reducible(e, al, be)
    if kind[0] == "B":
        raise AssertionError(f"case B reached at {e}")
    if kind[0] == "A":
        if not _pair_excess(D, e):
            raise AssertionError(f"case A with no failing (iv) at {e}")
        return _case_i_move(D, e, log)
    al = kind[1]
    exc = _case_c_excess(D, e, al)
    if not exc:
        raise AssertionError(f"case C({al}) with no failing pair at {e}")
    (i, j), _ = max(exc.items(), key=lambda kv: (kv[1], -X_PAIRS.index(kv[0])))
    log.append(f"case C({al}) on a{i}{j}")
    return _move_case_c(e, al, i, j)


def rewrite_II(D: DivisorClass, e: ExpY) -> SectionExpr:
    """Rewrite a section on Y as a combination of sections passing lift_II_criterion."""
    _require(y_membership(D, e))
    bound = 6 * (sum(e.a) + sum(e.l) + sum(e.c) + sum(e.lxyz))
    return _run(D, e, lift_II_criterion, _case_ii_move, _variant_II, bound, y_membership)


def loop_variant(D: DivisorClass, e) -> int:
    """The quantity every rewriting move strictly lowers; bounds the depth."""
    return _variant_II(D, e) if isinstance(e, ExpY) else _variant_I(D, e)


def one_strict_violated(D: DivisorClass, e: ExpY) -> bool:
    """True when c_a - l_a >= m_a + D.L_a for all three a (never expected)."""
    return all(e.ca(al) - e.la(al) >= m_alpha(D, al) + pair(D, L_CURVES[al]) for al in ALPHAS)


# ------------------------------------------------------- auxiliary inequalities


@dataclass(frozen=True)
class Inequality:
    name: str
    slack: int
    strict: bool = False

    @property
    def ok(self) -> bool:
        return self.slack > 0 if self.strict else self.slack >= 0


def inequality_suite(D: DivisorClass) -> list:
    """Instances of the auxiliary inequalities used by the two engines."""
    out = []
    l_ = special_curve("l")
    d, m5 = D.d, D.mi(5)
    for i, j, k, l in _orderings():
        out.append(Inequality(f"nonneg: D.(C{k};{l}-e5)>=0", _c_semi_e5(D, k, l)))
    for i, j, k, l in _orderings():
        rhs = _c_semi_e5(D, k, l)
        out.append(Inequality(f"m_alpha: -D.L_{chi(k, l)}<=D.(C{k};{l}-e5)",
                              rhs + pair(D, L_CURVES[chi(k, l)])))
    sum_m = sum(D.m)
    for i, j in X_PAIRS:
        lhs2 = -sum(pair(D, L_CURVES[b]) for b in ALPHAS if b != chi(i, j))
        rhs = min(d - m5 - D.mij(i, j), 3 * d - sum_m)
        out.append(Inequality(f"m_alpha+m_beta: pair {i}{j}", 2 * rhs - lhs2))
    ms = m_alphas(D)
    out.append(Inequality("sum m_alpha <= D.e5", m5 - sum(ms.values())))
    if not D.is_zero():
        tot = sum(pair(D, L_CURVES[b]) for b in ALPHAS)
        out.append(Inequality("-D.(Lx+Ly+Lz) < D.e5", m5 + tot, strict=True))
    seen = set()
    for i, j, k, l in _orderings():
        for u in (k, l):
            u2 = l if u == k else k
            for v, w in itertools.permutations([t for t in (j, k, l) if t != u]):
                key = (k, l, v, w, u2)
                if key in seen:
                    continue
                seen.add(key)
                lhs = _c_semi_e5(D, k, l) + _c_semi_e5(D, v, w)
                out.append(Inequality(f"sum C: D.(C{k};{l}+C{v};{w}-2e5)>=D.(e5-e{u2}5)",
                                      lhs - (m5 - D.mij(u2, 5))))
    return out


# ------------------------------------------------------------ reduction loop


def reduce_loop(D: DivisorClass, check: bool = False) -> list:
    """Trace [(generator name, class after the step)] of the outer induction.

    Generators on which D has no sections are fixed components and are
    subtracted; otherwise D is normalized and E_5 is subtracted.  With
    check=True every strip is confirmed by the oracle (h^0 unchanged).
    """
    trace = []
    cur = D
    bound = (pair(D, CURVE_C) + max(D.d, 0)
             + sum(max(0, D.d - x) for x in D.mline) + sum(max(0, -x) for x in D.m) + 1)
    while not cur.is_zero() and pair(cur, CURVE_C) >= 0:
        if len(trace) > bound:
            raise RuntimeError(f"reduction trace exceeded {bound} steps")
        fail = first_violation(cur)
        if fail is not None:
            name = fail[0].split(":")[0]
            g = generator_by_name(name)
            nxt = cur - gclass(g)
            if check:
                assert h0_p3(cur) == h0_p3(nxt), f"strip of {name} changed h0 at {cur}"
            trace.append((name, nxt))
            cur = nxt
            continue
        s, cur = normalize(cur)
        before = pair(cur, CURVE_C)
        nxt = cur - gclass(generator("E", 5))
        assert pair(nxt, CURVE_C) < before
        trace.append(("E5", nxt))
        cur = nxt
    return trace
