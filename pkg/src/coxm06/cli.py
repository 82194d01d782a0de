"""Command line interface: coxm06 <command> ...

Exit codes: 0 success, 1 a mathematical negative (not effective, failed
verification, invalid section data), 2 usage or I/O error.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import re
import sys

from . import lifting as lf
from .lattice import (CurveClass, format_class, generator_by_name, normalize, pair,
                      parse_class_expr, special_curve)
from .oracle import SURFACE_CONFIGS, enumerate_monomials, h0_p3, h0_surface
from .restriction import (Bidegree, Surface4Class, SurfaceYClass, necessary_inequalities,
                          restrict, surface4_avoid_q, surface4_effective)
from .sweep import SweepConfig, format_record, run_verify, sweep_classes
from .x_cone import parse_xclass, x_decompose


class UsageError(Exception):
    pass


class Negative(Exception):
    """A well-formed request whose mathematical answer is negative."""


# ------------------------------------------------------------------ parsing


def parse_curve(text: str) -> CurveClass:
    """Curve names: l, C, B, e1, e12, Lx, C12, C1;2, C1, B1."""
    t = text.strip()
    if t in ("l", "C", "B"):
        return special_curve(t)
    m = re.fullmatch(r"L([xyz])", t)
    if m:
        return special_curve("L", m.group(1))
    m = re.fullmatch(r"e(\d)(\d)?", t)
    if m:
        if m.group(2):
            return special_curve("eij", int(m.group(1)), int(m.group(2)))
        return special_curve("e", int(m.group(1)))
    m = re.fullmatch(r"C(\d);(\d)", t)
    if m:
        return special_curve("Ci;j", int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"([CB])(\d)(\d)?", t)
    if m:
        if m.group(1) == "C" and m.group(3):
            return special_curve("Cij", int(m.group(2)), int(m.group(3)))
        return special_curve("Ci" if m.group(1) == "C" else "Bi", int(m.group(2)))
    raise ValueError(f"unknown curve {text!r}")


def _ints(text: str) -> list:
    return [int(x) for x in text.split(",")]


def parse_s4(text: str) -> Surface4Class:
    try:
        d, m = text.split(";")
        return Surface4Class(int(d), _ints(m))
    except ValueError as exc:
        raise ValueError(f"bad surface class {text!r}; expected 'd;m1,m2,m3,m4'") from exc


def parse_y(text: str) -> SurfaceYClass:
    try:
        parts = text.split(";")
        d, m = int(parts[0]), _ints(parts[1])
        extra = _ints(parts[2]) if len(parts) > 2 else []
        extra += [0] * (3 - len(extra))
        return SurfaceYClass(d, m, *extra[:3])
    except (ValueError, IndexError, TypeError) as exc:
        raise ValueError(f"bad surface class {text!r}; expected 'd;m1,..,m4;mx,my,mz'") from exc


_EXP_KEY = re.compile(r"(a)(\d)(\d)|(l)(\d)|(c)([xyz])|(l)([xyz])")


def parse_exponents(text: str, y: bool):
    """'a12=1,l3=2,cz=1,lx=1' -> ExpE5 or ExpY (unlisted entries are 0)."""
    a, l, c, lx = {}, [0] * 4, {}, {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, _, val = item.partition("=")
        m = _EXP_KEY.fullmatch(key.strip())
        if not m or not val.strip().lstrip("-").isdigit():
            raise ValueError(f"bad exponent entry {item!r}")
        v = int(val)
        if m.group(1):
            p = tuple(sorted((int(m.group(2)), int(m.group(3)))))
            a[p] = v
        elif m.group(4):
            l[int(m.group(5)) - 1] = v
        elif m.group(6):
            c[m.group(7)] = v
        else:
            lx[m.group(9)] = v
    if y:
        return lf.ExpY.build(a, l, c, lx)
    if c or lx:
        raise ValueError("c and l_x entries only exist on Y (Case II)")
    return lf.ExpE5.build(a, l)


# ----------------------------------------------------------------- output


class Out:
    def __init__(self, fmt: str, stream):
        self.fmt = fmt
        self.stream = stream

    def text(self, line: str = ""):
        if self.fmt == "text":
            print(line, file=self.stream)

    def record(self, rec: dict):
        if self.fmt == "records":
            print(json.dumps(rec, sort_keys=True), file=self.stream)


# ---------------------------------------------------------------- commands


def cmd_class(args, out: Out) -> int:
    words = " ".join(args.expr)
    expr, _, curve = words.partition(" pair ")
    D = parse_class_expr(expr)
    if curve:
        v = pair(D, parse_curve(curve))
        out.text(str(v))
        out.record({"class": format_class(D), "curve": curve.strip(), "pairing": v})
    else:
        out.text(format_class(D))
        out.record({"class": format_class(D)})
    return 0


def _cert_out(out: Out, kind: str, arg: str, cert) -> int:
    out.text(str(cert))
    for note in cert.notes:
        out.text(f"  {note}")
    out.record({"kind": kind, "input": arg, **cert.to_dict()})
    return 0 if cert.is_effective else 1


def cmd_certify(args, out: Out) -> int:
    if args.x is not None:
        return _cert_out(out, "x", args.x, x_decompose(parse_xclass(args.x)))
    if args.s4 is not None:
        S = parse_s4(args.s4)
        cert = surface4_avoid_q(S) if args.avoid_q else surface4_effective(S)
        return _cert_out(out, "s4", args.s4, cert)
    D = parse_class_expr(args.d)
    fails = [(n, v) for n, v in necessary_inequalities(D) if v < 0]
    for n, v in fails:
        out.text(f"violated {n} (slack {v})")
    out.text("restrictions: all nonempty" if not fails else f"{len(fails)} violated")
    out.record({"kind": "restrictions", "class": format_class(D),
                "violated": [{"name": n, "slack": v} for n, v in fails]})
    return 0 if not fails else 1


def _restriction_str(r) -> str:
    if isinstance(r, Bidegree):
        return f"bidegree ({r.a}, {r.b})"
    return str(r)


def cmd_restrict(args, out: Out) -> int:
    D = parse_class_expr(args.cls)
    g = generator_by_name(args.gen)
    r = restrict(D, g)
    out.text(f"{g.name}: {_restriction_str(r)}")
    out.record({"class": format_class(D), "generator": g.name,
                "restriction": _restriction_str(r)})
    return 0


def cmd_h0(args, out: Out) -> int:
    if args.surface:
        if args.surface not in SURFACE_CONFIGS:
            raise ValueError(f"unknown surface {args.surface!r}; one of {sorted(SURFACE_CONFIGS)}")
        S = parse_y(args.cls)
        h = h0_surface(args.surface, S)
        label = str(S)
    else:
        D = parse_class_expr(args.cls)
        h = h0_p3(D)
        label = format_class(D)
    out.text(str(h))
    out.record({"class": label, "surface": args.surface or "M06", "h0": h})
    return 0


def cmd_monomials(args, out: Out) -> int:
    D = parse_class_expr(args.cls)
    mons = enumerate_monomials(D)
    for m in mons:
        out.text(str(m))
    out.text(f"{len(mons)} monomials")
    out.record({"class": format_class(D), "count": len(mons), "monomials": [str(m) for m in mons]})
    return 0


def _lift_one(D, e, case, out: Out) -> dict:
    crit = lf.lift_I_criterion if case == lf.CASE_I else lf.lift_II_criterion
    rewrite = lf.rewrite_I if case == lf.CASE_I else lf.rewrite_II
    delta = lf.delta_I if case == lf.CASE_I else lf.delta_II
    ok = crit(D, e)
    out.text(f"section {e}: {'lifts' if ok else 'needs rewriting'}")
    expr = lf.SectionExpr.single(e) if ok else rewrite(D, e)
    for step in expr.log:
        out.text(f"  {step}")
    terms = []
    for coef, t in expr.terms:
        res = delta(D, t)
        cert = x_decompose(res.delta)
        out.text(f"  {coef} * {t}  ->  {res.monomial}; delta {res.delta}: {cert}")
        terms.append({"coef": str(coef), "exponents": t.to_dict(), "monomial": str(res.monomial),
                      "delta": str(res.delta), "delta_certificate": cert.to_dict()})
    return {"exponents": e.to_dict(), "criterion": ok, "moves": expr.moves,
            "log": list(expr.log), "terms": terms}


def cmd_lift(args, out: Out) -> int:
    D = parse_class_expr(args.cls)
    sigma, N = normalize(D)
    if N != D:
        out.text(f"note: class is not normalized; normalized form is {format_class(N)}")
    case = lf.case_split(D)
    out.text(f"{format_class(D)}: {case}")
    if case == lf.CASE_II:
        out.text("m_x, m_y, m_z = " + ", ".join(str(v) for v in lf.m_alphas(D).values()))
    y = case == lf.CASE_II
    if args.exp is not None:
        try:
            e = parse_exponents(args.exp, y)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        bad = lf.y_membership(D, e) if y else lf.e5_membership(D, e)
        if bad:
            raise Negative("not a section of the restricted class: " + "; ".join(bad))
        sections = [e]
    else:
        sections = list(lf.iter_exp_y(D) if y else lf.iter_exp_e5(D))
        out.text(f"{len(sections)} distinguished sections")
    recs = [_lift_one(D, e, case, out) for e in sections]
    out.record({"class": format_class(D), "case": case, "sections": recs})
    return 0


def cmd_verify(args, out: Out) -> int:
    if args.box:
        b = _ints(args.box)
        if len(b) != 3:
            raise ValueError("--box takes d_max,m_max,mline_max")
        cfg = SweepConfig("box", box=tuple(b), jobs=args.jobs)
    else:
        cfg = SweepConfig("combinations", max_total=args.max_total, jobs=args.jobs)
    classes = sweep_classes(cfg)

    def emit(rec):
        print(format_record(rec, out.fmt), file=out.stream, flush=False)

    summary = run_verify(classes, cfg.jobs, emit)
    print(format_record(summary, out.fmt), file=out.stream)
    return 0 if summary["failed"] == 0 else 1


# -------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "records"), default="text",
                        help="plain text or one JSON record per line")
    common.add_argument("--out", metavar="PATH", help="write output to PATH")
    common.add_argument("--jobs", type=int, default=1, metavar="N", help="worker processes")

    p = argparse.ArgumentParser(prog="coxm06",
                                description="Divisor classes, certificates and section lifting on M_0,6.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("class", parents=[common], help="evaluate a class expression or a pairing")
    s.add_argument("expr", nargs="+", help="e.g. 'L123 + E1' or 'Q12.34 pair C'")
    s.set_defaults(func=cmd_class)

    s = sub.add_parser("certify", parents=[common], help="effectivity certificates")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--x", metavar="CLASS", help="class on X: 'd;m1..m4;m12..m34'")
    g.add_argument("--s4", metavar="CLASS", help="class on Bl_4 P^2: 'd;m1,m2,m3,m4'")
    g.add_argument("--d", metavar="CLASS", help="class on M_0,6: check all restrictions")
    s.add_argument("--avoid-q", action="store_true", help="with --s4: avoid the fourth point")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("restrict", parents=[common], help="restrict a class to a generator")
    s.add_argument("cls")
    s.add_argument("gen", help="generator name, e.g. E5, E12, L123, Q12.34")
    s.set_defaults(func=cmd_restrict)

    s = sub.add_parser("h0", parents=[common], help="exact h^0 by interpolation")
    s.add_argument("cls")
    s.add_argument("--surface", help="one of Bl4, Bl4q, KV6, Y7 (class 'd;m1..m4[;mx,my,mz]')")
    s.set_defaults(func=cmd_h0)

    s = sub.add_parser("monomials", parents=[common], help="distinguished monomials of a class")
    s.add_argument("cls")
    s.set_defaults(func=cmd_monomials)

    s = sub.add_parser("lift", parents=[common], help="lift sections from E_5 or Y")
    s.add_argument("cls")
    s.add_argument("--exp", help="exponents, e.g. 'a12=1,l1=1' or 'cz=1' (default: all sections)")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("verify", parents=[common], help="theorem verification sweep")
    s.add_argument("--max-total", type=int, default=2, help="sums of at most this many generators")
    s.add_argument("--box", metavar="D,M,ML", help="box of classes instead of generator sums")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.jobs < 1:
        print("error: --jobs must be at least 1", file=sys.stderr)
        return 2
    try:
        with contextlib.ExitStack() as stack:
            stream = sys.stdout
            if args.out:
                stream = stack.enter_context(open(args.out, "w", encoding="utf-8"))
            return args.func(args, Out(args.format, stream))
    except Negative as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
