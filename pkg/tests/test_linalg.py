import itertools
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operad_forge.errors import RingError
from operad_forge.linalg import (QQ, ZZ, ExactMatrix, GroundRing, BasedModule, coinvariants,
                                 homology_at, image_rank_and_torsion, integer_echelon,
                                 invariant_factors_rows, kernel_rows, parse_ring,
                                 quotient_by_relations, rank_rows, smith_normal_form,
                                 solve_rows)
from operad_forge.operad import perm_sign

F5 = GroundRing.F(5)


def det(m):
    """Leibniz formula: an oracle independent of elimination."""
    n = len(m)
    total = 0
    for p in itertools.permutations(range(n)):
        prod = perm_sign(tuple(x + 1 for x in p))
        for i in range(n):
            prod *= m[i][p[i]]
        total += prod
    return total


def determinantal_divisors(m):
    rows, cols = len(m), len(m[0]) if m else 0
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for R in itertools.combinations(range(rows), k):
            for C in itertools.combinations(range(cols), k):
                g = gcd(g, det([[m[i][j] for j in C] for i in R]))
        out.append(g)
    return out


def oracle_invariant_factors(m):
    dd = determinantal_divisors(m)
    out, prev = [], 1
    for d in dd:
        if d == 0:
            break
        out.append(d // prev)
        prev = d
    return out


def rows_of(m):
    return [{j: v for j, v in enumerate(r) if v} for r in m]


small = st.integers(-4, 4)
matrices = st.integers(1, 3).flatmap(
    lambda r: st.integers(1, 3).flatmap(
        lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_parse_ring():
    assert parse_ring("QQ") == QQ and parse_ring("ZZ") == ZZ
    assert parse_ring("GF(7)").characteristic == 7
    with pytest.raises(RingError):
        parse_ring("GF(4)")
    with pytest.raises(RingError):
        parse_ring("RR")


def test_field_arithmetic_mod_p():
    assert F5.norm(F5(7)) == 2
    assert F5.norm(F5.inv(2) * 2) == 1


def test_known_smith_form():
    m = ExactMatrix.from_rows(ZZ, [[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    D, U, V = smith_normal_form(m)
    assert [D[i, i] for i in range(3)] == [2, 6, 12]
    assert U @ m @ V == D


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_invariant_factors_match_determinantal_divisors(m):
    assert invariant_factors_rows(ZZ, rows_of(m)) == oracle_invariant_factors(m)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_matches_minors(m):
    dd = determinantal_divisors(m)
    expected = sum(1 for d in dd if d)
    assert rank_rows(QQ, rows_of(m)) == expected


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_kernel_is_annihilated_and_complete(m):
    ncols = len(m[0])
    for ring in (QQ, ZZ, F5):
        ker = kernel_rows(ring, rows_of(m), ncols)
        for v in ker:
            for r in m:
                assert ring.norm(ring(sum(r[j] * c for j, c in v.items()))) == 0
        assert len(ker) + rank_rows(ring, rows_of(m)) == ncols


@settings(max_examples=60, deadline=None)
@given(matrices, st.lists(small, min_size=3, max_size=3))
def test_solve_returns_a_solution_or_none(m, x):
    ncols = len(m[0])
    x = x[:ncols]
    rhs = [sum(r[j] * x[j] for j in range(ncols)) for r in m]
    for ring in (QQ, ZZ):
        sol = solve_rows(ring, rows_of(m), rhs, ncols)
        assert sol is not None
        for r, b in zip(m, rhs):
            assert sum(r[j] * sol.get(j, 0) for j in range(ncols)) == b
        if ring is ZZ:
            assert all(Fraction(v).denominator == 1 for v in sol.values())


def test_solve_detects_inconsistency_and_integrality():
    assert solve_rows(QQ, [{0: 1}, {0: 1}], [1, 2], 1) is None
    assert solve_rows(ZZ, [{0: 2}], [1], 1) is None
    assert solve_rows(QQ, [{0: 2}], [1], 1) == {0: Fraction(1, 2)}


def test_torsion_of_cokernel():
    assert image_rank_and_torsion(ZZ, [{0: 2, 1: 4}, {0: 6, 1: 8}]) == (2, [2, 4])
    assert image_rank_and_torsion(QQ, [{0: 2, 1: 4}, {0: 6, 1: 8}]) == (2, [])


def test_quotient_keeps_smallest_labels():
    mod = BasedModule(QQ, ("a", "b", "c"))
    q = quotient_by_relations(mod, [{0: 1, 2: -1}])
    assert q.module.rank == 2
    assert q.representatives == (0, 1)
    assert q.project({2: 1}) == {0: 1}


def test_coinvariants_of_swap():
    mod = BasedModule(QQ, ("ab", "ba"))
    swap = ExactMatrix.from_rows(QQ, [[0, 1], [1, 0]])
    q = coinvariants(mod, [swap])
    assert q.module.rank == 1


def test_homology_with_torsion():
    # Z --2--> Z --0--> 0 : H = Z/2 at the middle
    assert homology_at(ZZ, None, [{0: 2}], 1) == (0, [2])


def test_integer_echelon_positive_pivots():
    # the lattice spanned by (4, 6) and (6, 9) is Z (2, 3)
    assert integer_echelon([{0: 4, 1: 6}, {0: 6, 1: 9}]) == {0: {0: 2, 1: 3}}
    ech = integer_echelon([{0: -3, 1: 1}, {0: 5, 2: 2}])
    assert all(row[c] > 0 for c, row in ech.items())
