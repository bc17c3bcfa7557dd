"""The nine acceptance criteria, exact, each under its time limit.

Run alone with ``pytest tests/test_acceptance.py -v``; the terminal summary
prints one PASS/FAIL line per criterion.
"""

import itertools
import os
import random
import subprocess
import sys
from math import comb, factorial

import pytest

from acceptance_log import criterion
from operad_forge.algebra import (AlgebraHom, LieAlgebraData, extend_from_generators,
                                  free_algebra, generated_by_generators, jacobiator,
                                  lie_as_algebra, polynomial_algebra, restrict_to_generators,
                                  standard_lie)
from operad_forge.amodule import (augmentation_ideal, compare_with_tensor_oracle, derivations,
                                  enveloping, hom_from_P_check, regular_module,
                                  squarezero_representability_check, trivial_module)
from operad_forge.deformation import (level_one_classification, level_one_from_bracket,
                                      obstruction, prolong, tower_automorphisms)
from operad_forge.homology import (comparison_iso, ext_by_cochains, ext_by_koszul,
                                   koszul_exactness)
from operad_forge.inputs import algebra_from_block, parse_text
from operad_forge.linalg import QQ, ZZ, GroundRing, rank_rows
from operad_forge.operad import build_standard, check_axioms
from operad_forge.pbw import enveloping_by_rewriting, pbw_verify, pbw_via_deformation

F5 = GroundRing.F(5)
ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


# 1 ------------------------------------------------------------------------------------

def test_criterion_1_operad_axioms():
    with criterion(1, "operad axioms for com/ass/lie to arity 5 over QQ, GF(5), ZZ", 10):
        for ring in (QQ, F5, ZZ):
            for name in ("com", "ass", "lie"):
                op = build_standard(name, ring, 5)
                rep = check_axioms(op, 5)
                assert rep.passed, (name, ring, str(rep))
                if name == "ass":
                    assert op.ranks() == [factorial(n) for n in range(1, 6)]


# 2 ------------------------------------------------------------------------------------

def _restriction_is_bijective(F, M, ders, hom_rank):
    gens = [g for g in F.generators if g is not None]
    rows = []
    for phi in ders.basis:
        row = {}
        for a, g in enumerate(gens):
            for m, c in phi.get(g, {}).items():
                row[a * M.rank + m] = c
        rows.append(row)
    return ders.rank == hom_rank and rank_rows(F.ring, rows) == hom_rank


def test_criterion_2_free_adjunction():
    with criterion(2, "Free(V) adjunction and Omega(Free V, M) = Hom(V, M), rank V <= 3, D <= 4",
                   30):
        for name in ("com", "ass", "lie"):
            op = build_standard(name, QQ, 4)
            B = free_algebra(op, 2, 4)
            D = 4
            for r in (1, 2, 3):
                F = free_algebra(op, r, D)
                assert generated_by_generators(F)
                # every V -> B_1 extends uniquely and restricts back
                targets = B.basis_of_degree(1)
                count = 0
                for a in range(r):
                    for y in targets:
                        images = [{} for _ in range(r)]
                        images[a] = {y: QQ.one}
                        hom = extend_from_generators(F, B, images)
                        assert hom.check(D).passed
                        assert restrict_to_generators(hom) == images
                        count += 1
                assert count == r * len(targets)
                # derivations into the regular module and into a trivial module
                for M, j, target_deg in ((regular_module(F), 0, 1),
                                         (trivial_module(F, 2, 1), 0, 1)):
                    ders = derivations(F, M, j)
                    hom_rank = r * len(M.basis_of_degree(target_deg))
                    assert _restriction_is_bijective(F, M, ders, hom_rank), (name, r)


# 3 ------------------------------------------------------------------------------------

DUAL = """ring QQ
algebra D {
  operad ass
  basis one:0 x:1
  unit one
  product x x = 0
}
"""

TRIANGULAR = """ring QQ
algebra T {
  operad ass
  basis one:0 a:0 n:0
  unit one
  product a a = a
  product a n = n
  product n a = 0
  product n n = 0
}
"""


def test_criterion_3_enveloping_oracles():
    with criterion(3, "P_A = A (x) A^op for two algebras; P_g and U(g) filtered ranks", 60):
        for text in (DUAL, TRIANGULAR):
            A = algebra_from_block(parse_text(text), 4)
            P = enveloping(A, 4)
            assert P.check_associative().passed
            rep = compare_with_tensor_oracle(P)
            assert rep.passed, str(rep)
            assert P.rank == A.rank ** 2
            assert hom_from_P_check(P, regular_module(A)).passed
        g = standard_lie("heisenberg", QQ)
        P = enveloping(lie_as_algebra(g), 3, mode="filtered")
        U = enveloping_by_rewriting(g, 3)
        assert P.filtered_ranks() == U.filtered_ranks() == [1, 4, 10, 20]


# 4 ------------------------------------------------------------------------------------

def _identity(A):
    return AlgebraHom(A, A, [A.e(k) for k in range(A.rank)])


def test_criterion_4_square_zero_representability():
    with criterion(4, "Der(B, M) = algebra maps B -> A (+) M over A, both directions", 30):
        for r in (1, 2):
            S = polynomial_algebra(QQ, [f"x{k + 1}" for k in range(r)], 4, "com")
            for M in (regular_module(S), augmentation_ideal(S)):
                for j in (-1, 0, 1):
                    rep = squarezero_representability_check(S, _identity(S), M, j)
                    assert rep.passed, (r, j, str(rep))
        op = build_standard("ass", QQ, 4, unital=True)
        F = free_algebra(op, 2, 4)
        S = polynomial_algebra(QQ, ["x1", "x2"], 4, "ass")
        ab = extend_from_generators(F, S, [S.e(S.gen_index[0]), S.e(S.gen_index[1])])
        assert ab.check().passed
        for M in (regular_module(S), augmentation_ideal(S)):
            for j in (-1, 0, 1):
                rep = squarezero_representability_check(F, ab, M, j)
                assert rep.passed, (j, str(rep))
        for j in (-1, 0, 1):
            assert squarezero_representability_check(F, _identity(F), regular_module(F), j).passed


# 5 ------------------------------------------------------------------------------------

def test_criterion_5_koszul_exactness():
    with criterion(5, "Koszul complex of S(g): d^2 = 0 and exact, rank <= 3, degree <= 6", 60):
        for ring in (QQ, F5, ZZ):
            for r in (1, 2, 3):
                rep = koszul_exactness(r, 6, ring)
                assert rep.passed, (r, ring, str(rep))


# 6 ------------------------------------------------------------------------------------

def _ext_pair(A, M, n, j):
    k = ext_by_koszul(A, M, n, j)
    c = ext_by_cochains(A, M, n, j)
    assert (k.rank, k.torsion) == (c.rank, c.torsion), (n, j, k.rank, c.rank)
    return k.rank


def test_criterion_6_ext_of_symmetric_algebras():
    with criterion(6, "(Ext^2)_j and (Ext^3)_j of S(g) into S_+, both routes", 120):
        for r in (2, 3):
            A = polynomial_algebra(QQ, [f"x{k + 1}" for k in range(r)], 6, "ass")
            M = augmentation_ideal(A)
            assert _ext_pair(A, M, 2, -1) == r * comb(r, 2) == {2: 2, 3: 9}[r]
            assert comparison_iso(A, M, 2, -1).passed
            for j in (2, 3):
                assert _ext_pair(A, M, 2, -j) == 0
            if r == 3:
                assert _ext_pair(A, M, 3, -2) == r * comb(r, 3) == 3
                assert comparison_iso(A, M, 3, -2).passed
                for j in (3, 4):
                    assert _ext_pair(A, M, 3, -j) == 0


# 7 ------------------------------------------------------------------------------------

BATTERY = ("sl2", "heisenberg", "solvable2", "abelian3", "so3", "nonjacobi", "nonjacobi2")


def _random_brackets(seed, count, r=3):
    rng = random.Random(seed)
    names = [f"x{k + 1}" for k in range(r)]
    out = []
    for _ in range(count):
        br = {}
        for a, b in itertools.combinations(range(r), 2):
            v = {k: rng.randint(-2, 2) for k in range(r)}
            br[(a, b)] = {k: QQ(c) for k, c in v.items() if c}
        out.append(LieAlgebraData(QQ, names, br, name="random"))
    return out


def test_criterion_7_deformation_dichotomy():
    with criterion(7, "obstruction vanishes iff Jacobi; unique prolongations, no automorphisms",
                   120):
        nonjacobi = 0
        for name in BATTERY:
            g = standard_lie(name, QQ)
            tower = level_one_from_bracket(g, 4)
            assert tower.check_associativity().passed
            res = prolong(tower)
            assert res.obstructed == bool(jacobiator(g)), name
            assert res.obstruction.is_cocycle
            if res.obstructed:
                nonjacobi += 1
                assert res.obstruction.factor == 1      # restriction equals the Jacobiator
                continue
            t = res.tower
            while True:
                assert t.check_associativity().passed
                assert res.space_rank == 0                      # (H^1)_{-i-1} = 0
                auts = tower_automorphisms(t)
                assert auts.passed and auts.details["automorphisms"] == 0
                if t.level >= 3:
                    break
                res = prolong(t)
                assert not res.obstructed
                t = res.tower
        assert nonjacobi == 2
        for g in _random_brackets(7, 6):
            tower = level_one_from_bracket(g, 3)
            assert tower.check_associativity().passed
            assert obstruction(tower).vanishes == (not jacobiator(g))
        for r in (2, 3):
            assert level_one_classification(r, QQ).passed


# 8 ------------------------------------------------------------------------------------

def test_criterion_8_pbw_both_routes():
    with criterion(8, "PBW ranks, torsion-freeness over ZZ, rewriting = deformation route", 180):
        cases = (("sl2", QQ, 6), ("solvable2", F5, 6), ("heisenberg", ZZ, 4))
        for name, ring, D in cases:
            g = standard_lie(name, ring)
            rows = pbw_verify(g, D)
            r = len(g.names)
            assert [x.gr_rank for x in rows] == [comb(n + r - 1, n) for n in range(D + 1)]
            assert all(x.is_iso and not x.torsion for x in rows)
            rep = pbw_via_deformation(g, 4)
            assert rep.passed, str(rep)


# 9 ------------------------------------------------------------------------------------

CLI_RUNS = (
    ("operad-check", "operads.spec", ["--max-deg", "4"]),
    ("operad-check", "perturbed.spec", []),
    ("free-algebra", "free.spec", []),
    ("derivations", "sl2.spec", []),
    ("hochschild", "sg2.spec", ["--i", "1", "--j", "-1"]),
    ("ext", "sg2.spec", ["--i", "2", "--j", "-1"]),
    ("koszul-check", "koszul3.spec", ["--max-deg", "4"]),
    ("deform", "nonjacobi.spec", ["--levels", "2"]),
    ("deform", "sl2.spec", ["--levels", "2", "--max-deg", "3"]),
    ("pbw-verify", "sl2.spec", ["--max-deg", "4"]),
    ("pbw-deform", "solvable.spec", []),
    ("envelope", "dual.spec", []),
)


def _cli(args, threads):
    env = dict(os.environ, OPERAD_FORGE_THREADS=str(threads))
    env["PYTHONPATH"] = os.path.join(ROOT, "src") + os.pathsep + env.get("PYTHONPATH", "")
    p = subprocess.run([sys.executable, "-m", "operad_forge", *args], capture_output=True,
                       cwd=ROOT, env=env)
    return p.returncode, p.stdout


def test_criterion_9_cli_determinism():
    with criterion(9, "CLI reports byte-identical across runs and thread counts", 600):
        for cmd, spec, extra in CLI_RUNS:
            for fmt in ("text", "records"):
                args = [cmd, os.path.join("inputs", spec), *extra, "--format", fmt]
                outs = [_cli(args, t) for t in (1, 1, 4, 4)]
                assert outs[0][1], (cmd, spec)
                assert all(o == outs[0] for o in outs), (cmd, spec, fmt)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
