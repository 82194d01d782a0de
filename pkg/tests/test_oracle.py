import itertools
import random

import pytest

from coxm06 import geometry as geo
from coxm06.lattice import (GENERATORS, DivisorClass, Monomial, Perm5, apply_perm, gclass, generator,
                            generator_by_name, parse_class_expr)
from coxm06.oracle import (check_monomial_vanishing, enumerate_monomials, generic_vanishing_order,
                           h0_p3, h0_p3_generic, h0_surface, monomial_to_poly, span_rank,
                           verify_theorem)
from coxm06.polyform import PolyForm
from coxm06.restriction import Surface4Class, SurfaceYClass

from _samples import random_sum

Q1234 = gclass(generator_by_name("Q12.34"))
H = parse_class_expr("H")


def test_h0_anchors():
    assert h0_p3(H) == 4
    assert h0_p3(Q1234) == 1
    assert h0_p3(gclass(generator("L", 1, 2, 3))) == 1
    assert h0_p3(DivisorClass.zero()) == 1
    assert h0_p3(-1 * H) == 0


def test_h0_matches_generic_conditions():
    rng = random.Random(3)
    for _ in range(25):
        D = random_sum(rng, 1, 3)
        assert h0_p3(D) == h0_p3_generic(D)


def test_more_line_points_do_not_change_h0():
    rng = random.Random(4)
    for _ in range(10):
        D = random_sum(rng, 1, 3)
        assert h0_p3_generic(D, extra_points=2) == h0_p3_generic(D)


def test_h0_monotone_under_exceptionals():
    rng = random.Random(5)
    exc = [g for g in GENERATORS if g.kind in ("E", "Eij")]
    for _ in range(20):
        D = random_sum(rng, 1, 3)
        assert h0_p3(D) <= h0_p3(D + gclass(rng.choice(exc)))


def test_h0_invariant_under_coordinate_relabeling():
    # permuting p1..p4 is a coordinate permutation fixing p5
    rng = random.Random(6)
    for _ in range(8):
        D = random_sum(rng, 2, 4)
        for images in itertools.islice(itertools.permutations((1, 2, 3, 4)), 0, 24, 5):
            assert h0_p3(apply_perm(Perm5(images + (5,)), D)) == h0_p3(D)


def test_h0_surface_examples():
    assert h0_surface("Bl4", Surface4Class(5, (3, 3, 2, 1))) == 5
    assert h0_surface("Bl4", Surface4Class(1, (1, 1, 0, 0))) == 1
    assert h0_surface("Y7", SurfaceYClass(1, (0, 0, 0, 0), 1, 1, 0)) == 1
    with pytest.raises(ValueError):
        h0_surface("P5", Surface4Class(1, (0, 0, 0, 0)))


def test_enumerate_monomials():
    assert [str(m) for m in enumerate_monomials(Q1234)] == ["Q12.34"]
    assert enumerate_monomials(DivisorClass.zero()) == [Monomial()]
    # each plane times its exceptionals has class H
    mons = enumerate_monomials(H)
    assert len(mons) == 10
    assert all(m.cls() == H for m in mons)


def test_monomial_to_poly():
    q = monomial_to_poly(Monomial.parse("Q12.34"))
    assert q == PolyForm(4, 2, {(1, 1, 0, 0): 1, (0, 0, 1, 1): -1})
    assert monomial_to_poly(Monomial()) == PolyForm.one(4)
    assert monomial_to_poly(Monomial.parse("L123*L145")).degree == 2


def test_monomials_vanish_as_prescribed():
    rng = random.Random(8)
    for _ in range(15):
        for mon in enumerate_monomials(random_sum(rng, 1, 3))[:5]:
            assert check_monomial_vanishing(mon)


def test_span_rank():
    one = PolyForm.one(3)
    F = geo.q_line(1, 2) * geo.q_line(3, 4)
    assert span_rank([one]) == 1
    assert span_rank([F, 2 * F]) == 1
    quads = [geo.q_line(1, 2) * geo.q_line(3, 4), geo.q_line(1, 3) * geo.q_line(2, 4),
             geo.q_line(1, 4) * geo.q_line(2, 3)]
    assert span_rank(quads) == 2
    with pytest.raises(ValueError):
        span_rank([one, F])


def test_step1_relation_coefficients():
    assert geo.pencil_coefficients(geo.q_line(1, 2), geo.q_line(2, 3), geo.q_line(2, 4)) == (1, -1)


def test_generic_vanishing_order():
    assert generic_vanishing_order(Q1234, "x") == 1
    assert generic_vanishing_order(H, "x") == 0
    assert generic_vanishing_order(2 * Q1234, "x") == 2
    with pytest.raises(ValueError):
        generic_vanishing_order(-1 * H, "x")


def test_verify_theorem_examples():
    rep = verify_theorem(H)
    assert (rep.h0, rep.n_monomials, rep.rank, rep.passed) == (4, 10, 4, True)
    rep = verify_theorem(DivisorClass.zero())
    assert (rep.h0, rep.n_monomials, rep.rank, rep.passed) == (1, 1, 1, True)
    rep = verify_theorem(Q1234 + gclass(generator("E", 5)))
    assert (rep.h0, rep.rank, rep.passed) == (2, 2, True)
    assert set(rep.to_dict()) == {"class", "h0", "n_monomials", "rank", "pass", "seconds"}


def test_rank_never_exceeds_h0():
    rng = random.Random(9)
    for _ in range(20):
        rep = verify_theorem(random_sum(rng, 1, 4))
        assert rep.rank <= min(rep.n_monomials, rep.h0)
