import pytest

from operad_forge.algebra import LieAlgebraData, jacobiator, polynomial_algebra, standard_lie
from operad_forge.deformation import (apply_isomorphism, level_one_from_bracket, obstruction,
                                      prolong, run_tower, specialize, tower_automorphisms,
                                      trivial_tower)
from operad_forge.errors import ChainError
from operad_forge.linalg import QQ, ZZ


def idx(A, label):
    return A.names.index(label)


def test_first_order_is_straightening():
    # f e = e f - h in U(sl2), so mu_1(f, e) = -h
    t = level_one_from_bracket(standard_lie("sl2", QQ), 3)
    A = t.base
    assert t.mu(1, A.e(idx(A, "f")), A.e(idx(A, "e"))) == {idx(A, "h"): -1}
    assert t.mu(1, A.e(idx(A, "e")), A.e(idx(A, "f"))) == {}


def test_mu1_antisymmetrizes_to_the_bracket():
    for name in ("sl2", "heisenberg", "so3"):
        g = standard_lie(name, QQ)
        t = level_one_from_bracket(g, 3)
        A = t.base
        gen = [idx(A, n) for n in g.names]
        for a in range(g.rank):
            for b in range(g.rank):
                x = dict(t.mu(1, A.e(gen[a]), A.e(gen[b])))
                for k, c in t.mu(1, A.e(gen[b]), A.e(gen[a])).items():
                    x[k] = x.get(k, 0) - c
                br = g.bracket({a: 1}, {b: 1})
                assert {k: c for k, c in x.items() if c} == {gen[k]: c for k, c in br.items()}


@pytest.mark.parametrize("name", ["nonjacobi", "nonjacobi2"])
def test_obstruction_restricts_to_jacobiator(name):
    g = standard_lie(name, QQ)
    assert jacobiator(g)
    o = obstruction(level_one_from_bracket(g, 3))
    assert o.is_cocycle and not o.vanishes and o.factor == 1
    assert o.degree == -2


def test_two_prolongations_differ_by_an_isomorphism():
    for name in ("sl2", "heisenberg"):
        res = prolong(level_one_from_bracket(standard_lie(name, QQ), 4), alternative=True)
        assert not res.obstructed and res.difference_is_cocycle
        assert res.isomorphism is not None
        assert apply_isomorphism(res.tower, res.alternative, res.isomorphism)


def test_run_tower_stops_at_obstruction():
    history, res = run_tower(standard_lie("nonjacobi", QQ), 3, 3)
    assert len(history) == 1 and res.obstructed
    history, res = run_tower(standard_lie("heisenberg", ZZ), 3, 3)
    assert res is None and [t.level for t in history] == [1, 2, 3]


def test_specialization_filtration():
    g = standard_lie("sl2", QQ)
    history, _ = run_tower(g, 4, 4)
    s = specialize(history)
    assert s.check().passed
    assert s.filtered_ranks() == [1, 4, 10, 20, 35]
    A = s.tower.base
    # in A_1 the commutator of e and f is h
    ef = s.mul1(A.e(idx(A, "e")), A.e(idx(A, "f")))
    fe = s.mul1(A.e(idx(A, "f")), A.e(idx(A, "e")))
    diff = {k: ef.get(k, 0) - fe.get(k, 0) for k in set(ef) | set(fe)}
    assert {k: c for k, c in diff.items() if c} == {idx(A, "h"): 1}


def test_incompatible_chain_rejected():
    a = level_one_from_bracket(standard_lie("sl2", QQ), 3)
    b = level_one_from_bracket(standard_lie("heisenberg", QQ), 3)
    with pytest.raises(ChainError):
        specialize([a, b])


def test_automorphisms_match_derivations():
    A = polynomial_algebra(QQ, ["x", "y"], 4, "ass", weights=[1, 2])
    d = tower_automorphisms(trivial_tower(A, 1, 4)).details
    assert d["automorphisms"] == d["derivations"] == 1     # y -> x
    A = polynomial_algebra(QQ, ["x", "y"], 4, "ass")
    d = tower_automorphisms(trivial_tower(A, 1, 4)).details
    assert d["automorphisms"] == d["derivations"] == 0


def test_random_brackets_obstruction_iff_jacobi():
    import random
    rng = random.Random(3)
    for _ in range(5):
        br = {}
        for a, b in ((0, 1), (0, 2), (1, 2)):
            br[(a, b)] = {k: QQ(rng.randint(-1, 1)) for k in range(3)}
            br[(a, b)] = {k: c for k, c in br[(a, b)].items() if c}
        g = LieAlgebraData(QQ, ["x", "y", "z"], br, name="random")
        t = level_one_from_bracket(g, 3)
        assert t.check_associativity().passed
        assert obstruction(t).vanishes == (not jacobiator(g))
