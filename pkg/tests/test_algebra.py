from math import comb

import pytest

from operad_forge.algebra import (AlgebraHom, LieAlgebraData, binomial_ranks, check_algebra,
                                  exterior_power, extend_from_generators, free_algebra,
                                  jacobiator, lie_as_algebra, polynomial_algebra, standard_lie,
                                  symmetric_algebra)
from operad_forge.errors import AntisymmetryError, DegreeError, RingError, TruncationError
from operad_forge.linalg import QQ, ZZ, BasedModule, GroundRing
from operad_forge.operad import build_standard

F5 = GroundRing.F(5)


def moebius(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def witt(r, n):
    """Dimension of the degree-n part of the free Lie algebra on r generators."""
    return sum(moebius(d) * r ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def graded(A, D):
    return [len(A.basis_of_degree(d)) for d in range(D + 1)]


@pytest.mark.parametrize("r", [1, 2, 3])
def test_free_ranks(r):
    D = 4
    com = free_algebra(build_standard("com", QQ, D), r, D)
    ass = free_algebra(build_standard("ass", QQ, D), r, D)
    lie = free_algebra(build_standard("lie", QQ, D), r, D)
    assert graded(com, D)[1:] == [comb(n + r - 1, n) for n in range(1, D + 1)]
    assert graded(ass, D)[1:] == [r ** n for n in range(1, D + 1)]
    assert graded(lie, D)[1:] == [witt(r, n) for n in range(1, D + 1)]


def test_free_lie_over_f5():
    lie = free_algebra(build_standard("lie", F5, 4), 2, 4)
    assert graded(lie, 4)[1:] == [2, 1, 2, 3]


def test_free_lie_coinvariants_have_torsion_over_integers():
    # (x (x) x) (x) [-,-] is identified with its negative: 2 [x, x] = 0
    with pytest.raises(RingError):
        free_algebra(build_standard("lie", ZZ, 2), 1, 2)


def test_weighted_generators():
    F = free_algebra(build_standard("com", QQ, 4), 2, 4, weights=(1, 2), gen_names=("x", "y"))
    # x, y | x^2, y | x^3, xy | x^4, x^2 y, y^2
    assert graded(F, 4) == [0, 1, 2, 2, 3]


def test_free_algebras_satisfy_axioms():
    for name in ("com", "ass", "lie"):
        F = free_algebra(build_standard(name, QQ, 3), 2, 3)
        assert check_algebra(F).passed


def test_symmetric_fast_path_matches_free_construction():
    S = symmetric_algebra(2, 4, QQ)
    P = polynomial_algebra(QQ, ["x1", "x2"], 4, "com")
    assert S.labels == P.labels
    assert S.tables[0] == P.tables[0]
    assert graded(P, 4) == binomial_ranks(2, 4)


def test_sl2_is_lie_and_nonjacobi_fails_with_witness():
    sl2 = standard_lie("sl2", QQ)
    assert not jacobiator(sl2)
    assert check_algebra(lie_as_algebra(sl2)).passed
    nj = standard_lie("nonjacobi", QQ)
    J = jacobiator(nj)
    assert J == {(0, 1, 2): {0: -1, 1: -1, 2: -1}}
    rep = check_algebra(lie_as_algebra(nj))
    assert not rep.passed


def test_antisymmetry_is_enforced():
    with pytest.raises(AntisymmetryError):
        LieAlgebraData(QQ, ("a", "b"), {(0, 0): {0: 1}})
    with pytest.raises(AntisymmetryError):
        LieAlgebraData(QQ, ("a", "b"), {(0, 1): {0: 1}, (1, 0): {0: 1}})


def test_universal_map_from_free_lie_to_sl2():
    sl2 = standard_lie("sl2", QQ)
    g = lie_as_algebra(sl2)
    F = free_algebra(build_standard("lie", QQ, 3), 2, 3)
    hom = extend_from_generators(F, g, [g.e(0), g.e(1)], degree=0)
    assert hom.check().passed
    bracket = [k for k in range(F.rank) if F.degrees[k] == 2]
    assert [hom.images[k] for k in bracket] in ([{2: 1}], [{2: -1}])


def test_extension_degree_mismatch():
    S = polynomial_algebra(QQ, ["x"], 3, "com")
    F = free_algebra(build_standard("com", QQ, 3), 1, 3)
    with pytest.raises(DegreeError):
        extend_from_generators(F, S, [S.e(S.gen_index[0]) | {0: 1}])


def test_truncation_guard():
    with pytest.raises(TruncationError):
        free_algebra(build_standard("ass", QQ, 3), 2, 5)


def test_hom_identity_is_multiplicative():
    A = polynomial_algebra(QQ, ["x", "y"], 3, "ass")
    assert AlgebraHom(A, A, [A.e(k) for k in range(A.rank)]).check().passed


def test_exterior_power_inclusion():
    g = BasedModule(QQ, ("a", "b", "c"))
    L, inc = exterior_power(g, 2)
    assert L.rank == 3
    assert inc.rows == 9 and inc.cols == 3
