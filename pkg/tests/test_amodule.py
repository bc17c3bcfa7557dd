import pytest

from operad_forge.algebra import (AlgebraHom, free_algebra, lie_as_algebra, polynomial_algebra,
                                  standard_lie)
from operad_forge.amodule import (augmentation_ideal, check_module, compare_with_tensor_oracle,
                                  derivations, enveloping, free_module, hom_from_P_check,
                                  ideal_IA, is_derivation, module_from_actions, module_homs,
                                  regular_module, shift, square_zero_extension,
                                  squarezero_representability_check, trivial_module)
from operad_forge.algebra import check_algebra
from operad_forge.errors import SetupError
from operad_forge.inputs import algebra_from_block, parse_text
from operad_forge.linalg import QQ
from operad_forge.operad import build_standard

DUAL = "ring QQ\nalgebra D {\n operad ass\n basis one:0 x:1\n unit one\n product x x = 0\n}\n"


def dual():
    return algebra_from_block(parse_text(DUAL), 4)


def test_adjoint_module_axioms():
    assert check_module(regular_module(lie_as_algebra(standard_lie("sl2", QQ)))).passed
    assert not check_module(regular_module(lie_as_algebra(standard_lie("nonjacobi", QQ)))).passed


@pytest.mark.parametrize("name,rank", [("sl2", 3), ("heisenberg", 6), ("solvable2", 2),
                                       ("abelian3", 9)])
def test_lie_derivations(name, rank):
    # sl2: only inner derivations; heisenberg: D(x), D(y) free and D(z) forced;
    # solvable: D(y) in span(y), D(x) in span(y); abelian: all of gl_3
    g = lie_as_algebra(standard_lie(name, QQ))
    ders = derivations(g, regular_module(g), 0)
    assert ders.rank == rank
    assert all(is_derivation(g, regular_module(g), phi, 0) for phi in ders.basis)


def test_polynomial_derivations():
    S1 = polynomial_algebra(QQ, ["x"], 5, "com")
    for j in range(-1, 3):
        assert derivations(S1, regular_module(S1), j).rank == 1      # x -> x^(j+1)
    assert derivations(S1, regular_module(S1), -2).rank == 0
    S2 = polynomial_algebra(QQ, ["x", "y"], 4, "ass")
    assert derivations(S2, augmentation_ideal(S2), -1).rank == 0
    assert derivations(S2, regular_module(S2), -1).rank == 2


def test_free_ass_derivations_into_trivial_module():
    F = free_algebra(build_standard("ass", QQ, 3), 2, 3)
    assert derivations(F, trivial_module(F, 3, 1), 0).rank == 6


def test_square_zero_extension_is_an_algebra():
    S = polynomial_algebra(QQ, ["x"], 4, "com")
    E = square_zero_extension(S, shift(regular_module(S), 1))
    assert check_algebra(E).passed


def test_square_zero_representability_small():
    S = polynomial_algebra(QQ, ["x", "y"], 3, "com")
    ident = AlgebraHom(S, S, [S.e(k) for k in range(S.rank)])
    ranks = []
    for j in (-1, 0, 1):
        rep = squarezero_representability_check(S, ident, regular_module(S), j)
        assert rep.passed
        ranks.append(rep.details.get("derivations", derivations(S, regular_module(S), j).rank))
    assert ranks == [2, 4, 6]


def test_module_from_actions_rejects_unequal_com_actions():
    S = polynomial_algebra(QQ, ["x"], 2, "com")
    with pytest.raises(SetupError):
        module_from_actions(S, ["m"], [1], left={(1, 0): {0: 1}}, right={(1, 0): {}})


def test_enveloping_of_dual_numbers():
    A = dual()
    P = enveloping(A, 4)
    assert P.mode == "graded"
    assert P.rank == 4 and P.ranks()[:3] == [1, 2, 1]
    assert P.check_associative().passed
    assert compare_with_tensor_oracle(P).passed
    assert hom_from_P_check(P, regular_module(A)).passed


def test_enveloping_of_lie_matches_pbw_counts():
    g = lie_as_algebra(standard_lie("sl2", QQ))
    P = enveloping(g, 2, mode="filtered")
    assert P.filtered_ranks() == [1, 4, 10]


def test_free_module_rank_and_axioms():
    A = polynomial_algebra(QQ, ["x"], 3, "ass")
    F = free_module(A, 1, 3)
    # P_A = Q[x (x) 1, 1 (x) x]: monomials of degree <= 3
    assert F.rank == 10
    assert check_module(F).passed


def test_ideal_models_represent_derivations():
    A = dual()
    I = ideal_IA(A, 4)
    assert I.module.rank == 2
    M = regular_module(A)
    for j in (-1, 0, 1):
        assert len(module_homs(I.module, M, j)) == derivations(A, M, j).rank
    S = polynomial_algebra(QQ, ["x", "y"], 4, "com")
    I = ideal_IA(S, 4)
    assert [len(I.module.basis_of_degree(d)) for d in range(5)] == [0, 2, 4, 6, 8]
    M = regular_module(S)
    for j in (-1, 0, 1, 2):
        assert len(module_homs(I.module, M, j)) == derivations(S, M, j).rank
