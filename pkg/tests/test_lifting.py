import itertools

import pytest

from coxm06 import geometry as geo
from coxm06.lattice import (CURVE_C, DivisorClass, gclass, generator, generator_by_name,
                            pair, parse_class, parse_class_expr, special_curve)
from coxm06.lifting import (ExpE5, ExpY, case_split, classify_case, delta_I, delta_II,
                            e5_membership, identity_holds, inequality_suite, iter_exp_e5,
                            iter_exp_y, lift_I_criterion, lift_I_slacks, lift_II_criterion,
                            lift_II_slacks, loop_variant, m_alphas, one_strict_violated,
                            reduce_loop, rewrite_I, rewrite_II, y_membership)
from coxm06.oracle import h0_p3
from coxm06.x_cone import XClass, x_decompose

from _samples import lifting_classes

Q1234 = gclass(generator_by_name("Q12.34"))
H = parse_class_expr("H")
E1 = gclass(generator("E", 1))
L125 = gclass(generator("L", 1, 2, 5))

# classes and sections on which each kind of rewriting move fires
STEP1 = ("4;2,2,2,2,2;2,2,0,0,0,0,2,0,0,0", ExpE5.build({(2, 3): 1, (2, 4): 1}, [0, 0, 1, 1]))
STEP2 = ("7;3,4,4,4,3;0,0,3,2,1,1,1,3,2,0", ExpE5.build({(1, 3): 2, (2, 4): 1}, [0, 0, 0, 1]))
REPLACEMENT = ("12;7,6,7,6,5;3,5,3,2,2,3,0,3,2,2",
               ExpY.build({(1, 3): 1, (1, 4): 1, (3, 4): 1}, c={"x": 2}, lxyz={"y": 3, "z": 3}))
MIXED = ("7;4,4,4,4,3;1,3,3,1,2,1,0,1,1,0",
         ExpY.build({(1, 4): 1, (3, 4): 1}, [0, 0, 0, 2], {"y": 1}, {"x": 1, "z": 2}))
CASE_C = ("8;4,4,4,4,4;3,3,0,0,0,2,3,2,3,0", ExpY.build({(2, 3): 3}, c={"y": 1}, lxyz={"y": 3}))


def test_case_split():
    assert case_split(H) == "CaseI"
    assert case_split(Q1234) == "CaseII"
    assert case_split(DivisorClass.zero()) == "CaseI"


def test_lift_I_zero_section():
    assert lift_I_criterion(DivisorClass.zero(), ExpE5())
    res = delta_I(H, ExpE5())
    assert res.Dprime.is_zero() and res.delta == XClass(1, (0,) * 4, (0,) * 6)


def test_lift_I_plane_through_p5():
    e = ExpE5.build({(1, 2): 1})
    slack = lift_I_slacks(L125, e)["a12<=D.(C3;4-e5)"]
    assert slack == pair(L125, special_curve("Ci;j", 3, 4)) - L125.mi(5) - 1
    assert lift_I_criterion(L125, e)
    res = delta_I(L125, e)
    assert res.Dprime == L125 and res.delta.is_zero()
    assert str(res.monomial) == "L125"
    res = delta_I(L125 + E1, e)
    assert res.delta == XClass(0, (-1, 0, 0, 0), (0,) * 6)
    assert x_decompose(res.delta).names() == ["E1"]


def test_lift_I_rejects_non_sections():
    with pytest.raises(ValueError):
        lift_I_criterion(L125, ExpE5.build({(1, 3): 1}))
    with pytest.raises(ValueError):
        delta_I(L125, ExpE5())


def test_lift_I_false_for_huge_exponent():
    D = parse_class(STEP2[0])
    positive = sum(max(v, 0) for v in lift_I_slacks(D, ExpE5()).values())
    for e in iter_exp_e5(D):
        if max(e.a) > positive:
            assert not lift_I_criterion(D, e)


def test_lift_II_keel_vermeire_section():
    assert m_alphas(Q1234) == {"x": 1, "y": 1, "z": 0}
    e = ExpY.build(c={"z": 1})
    assert y_membership(Q1234, e) == []
    slacks = lift_II_slacks(Q1234, e)
    assert all(v >= 0 for v in slacks.values())
    assert lift_II_criterion(Q1234, e)
    res = delta_II(Q1234, e)
    assert res.Dprime == Q1234 and res.delta.is_zero()
    res = delta_II(Q1234 + E1, e)
    assert x_decompose(res.delta).names() == ["E1"]
    # budget: m_x + l_x = a13 + a24 + c_y + c_z
    assert m_alphas(Q1234)["x"] + e.la("x") == e.aij(1, 3) + e.aij(2, 4) + e.ca("y") + e.ca("z")


def test_lift_II_zero():
    assert lift_II_criterion(DivisorClass.zero(), ExpY())
    with pytest.raises(ValueError):
        lift_II_criterion(Q1234, ExpY.build(c={"z": 2}))


def test_classify_case():
    assert classify_case(ExpY()) == ("A",)
    assert classify_case(ExpY.build(c={"z": 1})) == ("B",)
    assert classify_case(ExpY.build(c={"z": 1}, lxyz={"x": 1})) == ("Reducible", "x", "z")
    assert classify_case(ExpY.build(c={"z": 1}, lxyz={"z": 1})) == ("C", "z")


def test_rewrite_noop_when_criterion_holds():
    e = ExpE5.build({(1, 2): 1})
    out = rewrite_I(L125, e)
    assert [(c, t) for c, t in out.terms] == [(1, e)] and out.moves == 0
    out = rewrite_II(Q1234, ExpY.build(c={"z": 1}))
    assert len(out.terms) == 1 and out.moves == 0


@pytest.mark.parametrize("anchor, first_move", [
    (STEP1, "step 1"), (STEP2, "step 2"), (REPLACEMENT, "replacement"),
    (MIXED, "replacement"), (CASE_C, "case C"),
])
def test_rewrite_anchors(anchor, first_move):
    D, e = parse_class(anchor[0]), anchor[1]
    y = isinstance(e, ExpY)
    crit = lift_II_criterion if y else lift_I_criterion
    assert not crit(D, e)
    out = (rewrite_II if y else rewrite_I)(D, e)
    assert out.log[0].startswith(first_move)
    assert identity_holds(e, out)
    assert all(crit(D, t) for t in out.exps())
    assert out.depth <= loop_variant(D, e)
    member = y_membership if y else e5_membership
    assert all(member(D, t) == [] for t in out.exps())


def test_mixed_anchor_uses_case_I_step():
    out = rewrite_II(parse_class(MIXED[0]), MIXED[1])
    assert any(x.startswith("step 1") for x in out.log)


def test_case_c_move_drops_family_sum_by_three():
    D, e = parse_class(CASE_C[0]), CASE_C[1]
    out = rewrite_II(D, e)
    assert out.moves == 1

    def fam(t):
        return t.aij(2, 3) + t.aij(1, 4) + t.ca("y") + t.la("y")
    assert all(fam(t) == fam(e) - 3 for t in out.exps())


def test_reducible_relation_coefficients():
    # the line through x, y lies in the pencil of lines through y spanned by l14 and l23
    f, g, h = geo.surface_line("x", "y"), geo.q_line(1, 4), geo.q_line(2, 3)
    lam, mu = geo.pencil_coefficients(f, g, h)
    assert lam * g + mu * h == f


def test_step2_relation_coefficients():
    f = geo.q_line(1, 2) * geo.q_line(3, 4)
    g = geo.q_line(1, 3) * geo.q_line(2, 4)
    h = geo.q_line(1, 4) * geo.q_line(2, 3)
    lam, mu = geo.pencil_coefficients(f, g, h)
    assert lam * g + mu * h == f


def test_derived_relations_hold_for_all_sections():
    for D in lifting_classes(21, 15, "CaseI", 4) + lifting_classes(22, 15, "CaseII", 3):
        m5 = D.mi(5)
        rows = sum(D.mij(i, 5) for i in range(1, 5))
        for e in (iter_exp_e5(D) if case_split(D) == "CaseI" else iter_exp_y(D)):
            assert sum(e.l) == 2 * sum(e.a) - rows
            for i, j in itertools.combinations(range(1, 5), 2):
                k, l = (t for t in range(1, 5) if t not in (i, j))
                assert (2 * (e.aij(k, l) - e.aij(i, j)) + e.li(i) + e.li(j) - e.li(k) - e.li(l)
                        == D.mij(k, 5) + D.mij(l, 5) - D.mij(i, 5) - D.mij(j, 5))
            if isinstance(e, ExpY):
                ms = m_alphas(D)
                assert m5 + sum(e.c) - sum(e.lxyz) == sum(ms.values())


def test_criterion_matches_decomposability_small():
    for D in lifting_classes(31, 20, "CaseI", 3):
        for e in iter_exp_e5(D):
            assert lift_I_criterion(D, e) == bool(x_decompose(delta_I(D, e).delta))
    for D in lifting_classes(32, 20, "CaseII", 2):
        for e in iter_exp_y(D):
            assert lift_II_criterion(D, e) == bool(x_decompose(delta_II(D, e).delta))


def test_one_strict_and_no_case_b_small():
    for D in lifting_classes(41, 10, "CaseII", 3):
        for e in iter_exp_y(D):
            assert not one_strict_violated(D, e)
            assert classify_case(e)[0] != "B"


def test_inequality_suite():
    assert all(q.ok for q in inequality_suite(H))
    zero = inequality_suite(DivisorClass.zero())
    assert all(q.slack == 0 for q in zero)
    assert not any(q.strict for q in zero)
    # the quadric fails its own restriction inequality, so the suite is out of scope there
    bad = {q.name: q.slack for q in inequality_suite(Q1234) if not q.ok}
    assert bad == {"sum m_alpha <= D.e5": -1, "-D.(Lx+Ly+Lz) < D.e5": 0}


def test_reduce_loop():
    assert [n for n, _ in reduce_loop(gclass(generator("E", 5)))] == ["E5"]
    assert reduce_loop(DivisorClass.zero()) == []
    trace = reduce_loop(Q1234, check=True)
    assert trace[-1][1].is_zero()
    D = 2 * Q1234 + parse_class_expr("L123 + H")
    trace = reduce_loop(D, check=True)
    assert len(trace) <= pair(D, CURVE_C) + 20
    assert all(h0_p3(c) > 0 for _, c in trace)
    assert trace[-1][1].is_zero() or pair(trace[-1][1], CURVE_C) < 0


def test_expr_serialization():
    D, e = parse_class(STEP1[0]), STEP1[1]
    out = rewrite_I(D, e)
    for coef, data in out.to_list():
        assert "/" in coef or coef.lstrip("-").isdigit()
        assert set(data) == set(e.to_dict())
