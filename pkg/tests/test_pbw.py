from math import comb

import pytest

from operad_forge.algebra import standard_lie
from operad_forge.errors import JacobiError
from operad_forge.linalg import QQ, ZZ, GroundRing
from operad_forge.pbw import (enveloping_by_rewriting, pbw_verify, pbw_via_deformation,
                              surjection_check)

F3 = GroundRing.F(3)


@pytest.mark.parametrize("name,ring", [("sl2", QQ), ("so3", F3), ("heisenberg", ZZ),
                                       ("abelian3", ZZ)])
def test_gr_ranks_are_binomial(name, ring):
    g = standard_lie(name, ring)
    rows = pbw_verify(g, 4)
    assert [x.gr_rank for x in rows] == [comb(n + g.rank - 1, n) for n in range(5)]
    assert all(x.is_iso and x.torsion == [] for x in rows)


def test_rewriting_basis_is_ordered_monomials():
    U = enveloping_by_rewriting(standard_lie("sl2", QQ), 3)
    assert U.filtered_ranks() == [1, 4, 10, 20]
    assert U.graded_ranks() == [1, 3, 6, 10]
    e, f, h = (U.names.index(n) for n in ("e", "f", "h"))
    # [e, f] = h in U(sl2)
    ef = U.mul({e: 1}, {f: 1})
    fe = U.mul({f: 1}, {e: 1})
    comm = {k: ef.get(k, 0) - fe.get(k, 0) for k in set(ef) | set(fe)}
    assert {k: c for k, c in comm.items() if c} == {h: 1}


def test_rewriting_is_associative():
    U = enveloping_by_rewriting(standard_lie("heisenberg", QQ), 3)
    gens = [U.names.index(n) for n in standard_lie("heisenberg", QQ).names]
    for a in gens:
        for b in gens:
            for c in gens:
                assert U.mul(U.mul({a: 1}, {b: 1}), {c: 1}) == U.mul({a: 1}, U.mul({b: 1}, {c: 1}))


def test_non_jacobi_bracket_breaks_pbw():
    g = standard_lie("nonjacobi", QQ)
    with pytest.raises(JacobiError):
        pbw_verify(g, 3)
    with pytest.raises(JacobiError):
        pbw_via_deformation(g, 3)
    rows = pbw_verify(g, 4, require_jacobi=False)
    assert not rows[1].is_iso          # the generators themselves collapse
    assert surjection_check(g, 4)


def test_deformation_route_agrees():
    assert pbw_via_deformation(standard_lie("so3", QQ), 3).passed
