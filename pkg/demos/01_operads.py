"""Build com, ass and lie up to arity 5 and check the operad axioms over three rings.
A perturbed composition table shows what a failure report looks like."""

from operad_forge import QQ, ZZ, GroundRing, build_standard, check_axioms

for ring in (QQ, ZZ, GroundRing.F(5)):
    for name in ("com", "ass", "lie"):
        op = build_standard(name, ring, 5)
        rep = check_axioms(op, 5)
        print(f"{name:>3} over {ring}: ranks {op.ranks()}  axioms {'ok' if rep.passed else 'FAIL'}")

ass = build_standard("ass", QQ, 3)
bad = ass.with_composition_entry((2, 1, 1), (0, 0), {1: QQ.one})
print()
print("ass with one composition entry changed:")
print(check_axioms(bad, 3))
