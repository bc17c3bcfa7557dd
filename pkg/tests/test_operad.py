from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operad_forge.errors import ArityError, RingError
from operad_forge.linalg import QQ, ZZ, GroundRing
from operad_forge.operad import (OperadElement, build_standard, check_axioms, compose_perm,
                                 left_normed, lie_expand, perm_inverse, perm_sign)

F5 = GroundRing.F(5)


@pytest.mark.parametrize("ring", [QQ, ZZ, F5], ids=str)
@pytest.mark.parametrize("name", ["com", "ass", "lie"])
def test_axioms_to_arity_four(name, ring):
    assert check_axioms(build_standard(name, ring, 4)).passed


def test_ranks():
    assert build_standard("com", QQ, 5).ranks() == [1] * 5
    assert build_standard("ass", QQ, 5).ranks() == [factorial(n) for n in range(1, 6)]
    # dim Lie(n) = (n-1)!
    assert build_standard("lie", QQ, 5).ranks() == [factorial(n - 1) for n in range(1, 6)]


def test_lie_integral_basis_survives_reduction():
    lz = build_standard("lie", ZZ, 5)
    assert lz.base_change(F5).ranks() == lz.ranks() == build_standard("lie", F5, 5).ranks()


def test_ass_composition_is_substitution():
    ass = build_standard("ass", QQ, 4)
    w12 = ass.spaces[2].index((1, 2))
    w21 = ass.spaces[2].index((2, 1))
    # (x1 x2) o_1 (x2 x1) = x2 x1 x3
    res = ass.compose_vec(2, 1, 2, {w12: 1}, {w21: 1})
    assert res == {ass.spaces[3].index((2, 1, 3)): 1}


def test_lie_brackets_antisymmetric():
    vec = lie_expand(left_normed([1, 2]))
    swapped = lie_expand(left_normed([2, 1]))
    assert {k: -v for k, v in vec.items()} == swapped


def test_perturbed_composition_is_caught_with_witness():
    ass = build_standard("ass", QQ, 3)
    bad = ass.with_composition_entry((2, 1, 1), (0, 0), {1: QQ.one})
    rep = check_axioms(bad)
    assert not rep.passed
    assert not rep["associativity"]
    assert rep.witnesses["associativity"]


def test_equivariance_only_perturbation():
    ass = build_standard("ass", QQ, 3)
    bad = ass.with_composition_entry((2, 1, 2), (0, 0), {1: QQ.one})
    rep = check_axioms(bad)
    assert not rep["equivariance"]


def test_arity_guard():
    with pytest.raises(ArityError):
        build_standard("ass", QQ, 0)
    with pytest.raises(RingError):
        build_standard("lie-unital", QQ, 3)


perms = st.integers(2, 5).flatmap(lambda n: st.permutations(list(range(1, n + 1))))


@settings(max_examples=50, deadline=None)
@given(perms, st.data())
def test_action_is_a_left_action(p, data):
    n = len(p)
    q = data.draw(st.permutations(list(range(1, n + 1))))
    ass = build_standard("ass", QQ, 5)
    f = OperadElement(n, {0: QQ.one})
    lhs = ass.act(tuple(p), ass.act(tuple(q), f))
    rhs = ass.act(compose_perm(tuple(p), tuple(q)), f)
    assert lhs.coords == rhs.coords


@settings(max_examples=50, deadline=None)
@given(perms)
def test_sign_is_multiplicative(p):
    p = tuple(p)
    assert perm_sign(compose_perm(p, perm_inverse(p))) == 1
    assert perm_sign(perm_inverse(p)) == perm_sign(p)
