import itertools
import random

import pytest

from coxm06.oracle import h0_p3
from coxm06.x_cone import (XClass, parse_xclass, x_apply_perm, x_cox_generators, x_decompose,
                           x_generator_class, x_inequalities)

ALL_EIJ_2H = parse_xclass("2;0,0,0,0;1,1,1,1,1,1")


def test_strictness_counterexample():
    slacks, strict = x_inequalities(ALL_EIJ_2H)
    assert all(v >= 0 for _, v in slacks)
    assert all(v == 0 for n, v in slacks if n.startswith("(4)"))
    assert not strict
    assert x_decompose(ALL_EIJ_2H).witness == ("(4) strictness", 0)


def test_zero_class():
    slacks, strict = x_inequalities(XClass.zero())
    assert all(v == 0 for _, v in slacks) and not strict
    cert = x_decompose(XClass.zero())
    assert cert and cert.terms == ()


def test_plane_slacks():
    slacks, strict = x_inequalities(x_generator_class("L123"))
    assert all(v >= 0 for _, v in slacks)
    # every line l - e_ij - e_kl meets the plane in the boundary, so no family (4) slack is positive
    assert not strict
    assert x_decompose(x_generator_class("L123")).names() == ["L123"]


def test_decompose_generator_sum():
    D = x_generator_class("L123") + 2 * x_generator_class("E1") + x_generator_class("E24")
    cert = x_decompose(D)
    assert cert.multiset() == {"L123": 1, "E1": 2, "E24": 1}
    assert cert.total(XClass.zero()) == D


def test_decompose_multiple_of_H():
    D = XClass(3, (0,) * 4, (0,) * 6)
    cert = x_decompose(D)
    assert cert.total(XClass.zero()) == D
    assert cert.multiset()["L234"] == 3


def test_cox_generators():
    names = x_cox_generators()
    assert len(names) == 14 and "L124" in names


def test_decompose_agrees_with_oracle():
    rng = random.Random(1)
    for _ in range(400):
        D = XClass(rng.randint(0, 4), [rng.randint(-1, 3) for _ in range(4)],
                   [rng.randint(-1, 3) for _ in range(6)])
        cert = x_decompose(D)
        assert bool(cert) == (h0_p3(D.embed()) > 0), D
        if cert:
            assert cert.total(XClass.zero()) == D
            assert all(n in x_cox_generators() for n in cert.names())


def test_decompose_every_small_generator_sum():
    gens = [x_generator_class(n) for n in x_cox_generators()]
    for combo in itertools.combinations_with_replacement(range(14), 3):
        D = XClass.zero()
        for k in combo:
            D = D + gens[k]
        cert = x_decompose(D)
        assert cert and cert.total(XClass.zero()) == D


def test_inequalities_invariant_under_relabeling():
    D = parse_xclass("5;2,1,3,0;1,2,0,1,3,1")
    base = sorted(v for _, v in x_inequalities(D)[0])
    for images in itertools.permutations((1, 2, 3, 4)):
        assert sorted(v for _, v in x_inequalities(x_apply_perm(images, D))[0]) == base


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_xclass("2;0,0,0;1,1,1,1,1,1")
    assert str(parse_xclass(str(ALL_EIJ_2H))) == str(ALL_EIJ_2H)
