import itertools
import random

import pytest

from coxm06 import geometry as geo
from coxm06.lattice import DivisorClass, gclass, generator, generator_by_name, normalize, parse_class_expr
from coxm06.oracle import h0_surface
from coxm06.restriction import (Bidegree, Surface4Class, SurfaceYClass, first_violation,
                                multiplicity_lower_bound, necessary_inequalities, passes_necessary,
                                restrict_to_Ei, restrict_to_Eij, restrict_to_KV, restrict_to_plane,
                                surface4_avoid_q, surface4_decompositions, surface4_effective,
                                surface4_inequalities, y_lift_witness, y_running_inequalities,
                                y_term_form)

from _samples import random_sum

Q1234 = gclass(generator_by_name("Q12.34"))
KV = generator_by_name("Q12.34")
H = parse_class_expr("H")
E5 = gclass(generator("E", 5))
L125 = gclass(generator("L", 1, 2, 5))
L123 = gclass(generator("L", 1, 2, 3))


def test_restrict_to_Ei():
    assert restrict_to_Ei(Q1234, 5) == Surface4Class(1, (0, 0, 0, 0))
    assert restrict_to_Ei(E5, 5) == Surface4Class(-1, (0, 0, 0, 0))
    assert restrict_to_Ei(L125, 5) == Surface4Class(1, (1, 1, 0, 0))


def test_restrict_to_Eij():
    assert restrict_to_Eij(H, 1, 2) == Bidegree(1, 0)
    assert restrict_to_Eij(L123, 2, 1) == Bidegree(0, 1)
    assert restrict_to_Eij(Q1234, 1, 3) == Bidegree(1, 1)


def test_restrict_to_plane():
    assert restrict_to_plane(H, 1, 2, 3) == Surface4Class(1, (0, 0, 0, 0))
    assert restrict_to_plane(L123, 1, 2, 3) == Surface4Class(-2, (-1, -1, -1, 0))
    D = DivisorClass.build(0, mline={(4, 5): 1})
    assert restrict_to_plane(D, 1, 2, 3) == Surface4Class(0, (0, 0, 0, 1))


def test_restrict_to_KV():
    assert restrict_to_KV(H, KV) == SurfaceYClass(2, (0, 0, 0, 0), 1, 1, 0)
    assert restrict_to_KV(Q1234, KV) == SurfaceYClass(-1, (-1, -1, -1, -1), -1, -1, 0)
    assert restrict_to_KV(E5, KV) == SurfaceYClass(1, (0, 0, 0, 0), 1, 1, 0)


def test_restrict_to_KV_follows_relabeling():
    # the class H has the same restriction to every quadric
    for name in ("Q13.24", "Q14.25", "Q23.45"):
        assert restrict_to_KV(H, generator_by_name(name)) == SurfaceYClass(2, (0, 0, 0, 0), 1, 1, 0)


def test_necessary_inequalities():
    failing = [n for n, v in necessary_inequalities(Q1234) if v < 0]
    assert failing == ["Q12.34: 2d>=m5+m13+m14+m23+m24"]
    assert dict(necessary_inequalities(Q1234))[failing[0]] == -1
    assert passes_necessary(H)
    assert all(v == 0 for _, v in necessary_inequalities(DivisorClass.zero()))
    assert first_violation(Q1234)[0] == failing[0]


def test_necessary_implies_surface_restrictions_effective():
    rng = random.Random(11)
    checked = 0
    while checked < 60:
        D = random_sum(rng, 1, 6)
        if not passes_necessary(D):
            continue
        checked += 1
        for i in range(1, 6):
            assert surface4_effective(restrict_to_Ei(D, i))
        for t in itertools.combinations(range(1, 6), 3):
            assert surface4_effective(restrict_to_plane(D, *t))


def test_surface4_effective_examples():
    cert = surface4_effective(Surface4Class(5, (3, 3, 2, 1)))
    assert cert.names() == ["H-E1-E2", "H-E1-E3", "H-E1-E3", "H-E2-E4", "H-E2"]
    assert surface4_effective(Surface4Class(0, (0, 0, 0, 0))).terms == ()
    cert = surface4_effective(Surface4Class(1, (1, 1, 1, 0)))
    assert not cert and cert.witness == ("2d-sum m>=0", -1)


def test_surface4_effective_box():
    for d in range(0, 7):
        for m in itertools.product(range(-2, 7), repeat=4):
            S = Surface4Class(d, m)
            cert = surface4_effective(S)
            assert bool(cert) == all(v >= 0 for _, v in surface4_inequalities(S))
            if cert:
                assert cert.total(Surface4Class.zero()) == S


def test_surface4_effective_agrees_with_oracle():
    for d in range(0, 4):
        for m in itertools.product(range(0, 4), repeat=4):
            S = Surface4Class(d, m)
            assert bool(surface4_effective(S)) == (h0_surface("Bl4", S) > 0)


def test_surface4_avoid_q_examples():
    cert = surface4_avoid_q(Surface4Class(1, (1, 1, 0, 0)))
    assert not cert and cert.witness == ("D.(H-E1-E2)", -1)
    assert surface4_avoid_q(Surface4Class(2, (1, 1, 1, 1))).names() == ["l13", "l24"]
    # D.(H-E1-E2) = -1, so every decomposition uses l12
    assert not surface4_avoid_q(Surface4Class(5, (3, 3, 2, 1)))


def test_surface4_avoid_q_matches_exhaustive_search():
    for d in range(0, 5):
        for m in itertools.product(range(0, 4), repeat=4):
            S = Surface4Class(d, m)
            cert = surface4_avoid_q(S)
            exists = any(k[(1, 2)] == 0 and k[(3, 4)] == 0
                         for k, _ in surface4_decompositions(S))
            assert bool(cert) == exists, S
            if cert:
                assert "l12" not in cert.names() and "l34" not in cert.names()
                assert cert.total(Surface4Class.zero()) == S


def _y_box():
    for d in range(0, 5):
        for m4, m1, m2, m3 in itertools.product(range(3), repeat=4):
            if not m4 <= m1 <= m2 <= m3:
                continue
            for mx, my, mz in itertools.product(range(3), repeat=3):
                S = SurfaceYClass(d, (m1, m2, m3, m4), mx, my, mz)
                if all(v >= 0 for _, v in y_running_inequalities(S)):
                    yield S


def test_y_lift_witness_avoids_q4_in_both_branches():
    q4 = geo.SURFACE_POINTS[4]
    branches = set()
    for S in _y_box():
        for k in range(S.m[3] + 1):
            cert = y_lift_witness(S, k)
            assert cert
            branches.add(S.my - k < 0)
            assert all(y_term_form(n)(q4) != 0 for n in cert.names())
    assert branches == {True, False}


def test_y_lift_witness_any_alpha_in_range():
    S = SurfaceYClass(4, (1, 1, 1, 1), 0, 2, 0)
    k = 0
    cert = y_lift_witness(S, k)
    n1 = S.m[0] + S.m[3] + S.mx + S.my - S.d - 2 * k
    n2 = 2 * S.d - S.m[1] - S.m[2] - S.mx - S.mz - 2 * k
    assert n1 <= n2 and 0 <= n2
    alphas = range(max(n1, 0), min(n2, S.my - k) + 1)
    assert len(alphas) == 3
    for a in alphas:
        assert y_lift_witness(S, k, alpha=a)
    with pytest.raises(ValueError):
        y_lift_witness(S, k, alpha=S.my + 1)
    assert cert.notes


def test_y_lift_witness_zero_and_preconditions():
    assert y_lift_witness(SurfaceYClass.zero(), 0).terms == ()
    with pytest.raises(ValueError):
        y_lift_witness(SurfaceYClass(1, (0, 0, 0, 1), 0, 0, 0), 0)
    with pytest.raises(ValueError):
        y_lift_witness(SurfaceYClass(3, (1, 1, 1, 1), 0, 0, 0), 2)


def test_multiplicity_lower_bound():
    assert multiplicity_lower_bound(Q1234, "x") == 1
    assert multiplicity_lower_bound(H, "x") == -1
    assert multiplicity_lower_bound(DivisorClass(3, [2] * 5, [1] * 10), "x") == 1


def test_restriction_to_E5_after_normalize():
    rng = random.Random(12)
    for _ in range(20):
        _, D = normalize(random_sum(rng, 1, 5))
        S = restrict_to_Ei(D, 5)
        assert S.d == D.mi(5)
        assert S.m == tuple(D.mij(i, 5) for i in range(1, 5))
