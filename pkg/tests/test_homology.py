import os
from math import comb

import pytest

from operad_forge.algebra import polynomial_algebra
from operad_forge.amodule import augmentation_ideal, derivations, regular_module
from operad_forge.errors import ScopeError
from operad_forge.homology import (comparison_iso, ext_by_cochains, ext_by_koszul, hochschild_total,
                                   koszul_exactness, cohomology_H, quillen_consistency)
from operad_forge.inputs import algebra_from_block, parse_spec
from operad_forge.linalg import QQ, ZZ, GroundRing

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def sym_rank(r, d):
    return comb(d + r - 1, d) if d >= 0 else 0


def oracle_ext(r, n, j):
    """Ext^n(S(V), S_+)_j = Hom(Lambda^n V, S_+) in internal degree j."""
    d = n + j
    return comb(r, n) * sym_rank(r, d) if d >= 1 else 0


@pytest.mark.parametrize("r", [1, 2])
def test_ext_matches_exterior_oracle_both_routes(r):
    A = polynomial_algebra(QQ, [f"x{k}" for k in range(r)], 5, "ass")
    M = augmentation_ideal(A)
    for n in (1, 2, 3):
        for j in (-2, -1, 0, 1):
            k = ext_by_koszul(A, M, n, j)
            c = ext_by_cochains(A, M, n, j)
            assert k.rank == c.rank == oracle_ext(r, n, j), (n, j)
            assert k.torsion == c.torsion == []


def test_ext_over_integers_is_free():
    A = polynomial_algebra(ZZ, ["x", "y"], 5, "ass")
    M = augmentation_ideal(A)
    e = ext_by_cochains(A, M, 2, -1)
    assert (e.rank, e.torsion) == (2, [])
    assert quillen_consistency(A, M, 2, -1).passed


def test_shifteding_shift():
    A = polynomial_algebra(QQ, ["x", "y"], 5, "ass")
    M = augmentation_ideal(A)
    assert cohomology_H(A, M, 0, 0).rank == derivations(A, M, 0).rank == 4
    assert cohomology_H(A, M, 1, -1).rank == ext_by_koszul(A, M, 2, -1).rank
    with pytest.raises(ScopeError):
        cohomology_H(A, M, -1, 0)


def test_comparison_map_is_iso():
    A = polynomial_algebra(QQ, ["x", "y"], 5, "ass")
    assert comparison_iso(A, augmentation_ideal(A), 2, 0).passed


@pytest.mark.parametrize("ring", [QQ, ZZ, GroundRing.F(3)])
def test_koszul_complex_exact(ring):
    assert koszul_exactness(2, 5, ring).passed


def test_dual_numbers_hochschild():
    # classical: HH^0(k[e]/e^2) = k[e], HH^n = k for n >= 1 in characteristic 0
    A = algebra_from_block(parse_spec(os.path.join(ROOT, "inputs", "dual.spec")), 4)
    assert [hochschild_total(A, regular_module(A), n) for n in range(5)] == [2, 1, 1, 1, 1]


def test_total_needs_finite_algebra():
    A = polynomial_algebra(QQ, ["x"], 3, "ass")
    with pytest.raises(ScopeError):
        hochschild_total(A, regular_module(A), 1)
