"""Graded deformations of S(g): the level-one tower comes from the bracket, each
prolongation solves a Hochschild equation, and the obstruction is the Jacobiator."""

from operad_forge import QQ, prolong, specialize, standard_lie
from operad_forge.deformation import level_one_from_bracket, run_tower
from operad_forge.report import format_vec

g = standard_lie("sl2", QQ)
history, stop = run_tower(g, 4, 3)
print("sl2: tower levels", [t.level for t in history], "obstructed:", stop is not None)
s = specialize(history)
A = s.tower.base
e, f = A.names.index("e"), A.names.index("f")
print("in A_1: e*f =", format_vec(A.names, s.mul1(A.e(e), A.e(f))))
print("        f*e =", format_vec(A.names, s.mul1(A.e(f), A.e(e))))
print(s.check())

bad = standard_lie("nonjacobi", QQ)
tower = level_one_from_bracket(bad, 3)
res = prolong(tower)
print()
print("non-Jacobi bracket: obstructed =", res.obstructed)
for (a, b, c), v in sorted(res.obstruction.restriction.items()):
    print(f"  o({bad.names[a]}, {bad.names[b]}, {bad.names[c]}) =", format_vec(bad.names, v))
print("  ratio to the Jacobiator:", res.obstruction.factor)
