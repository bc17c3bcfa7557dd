"""Poincare-Birkhoff-Witt: gr U(g) against S(g) degree by degree, over QQ, GF(5)
and ZZ, then the same conclusion reached through the deformation tower."""

from operad_forge import QQ, ZZ, GroundRing, pbw_verify, pbw_via_deformation, standard_lie

for name, ring in (("sl2", QQ), ("solvable2", GroundRing.F(5)), ("heisenberg", ZZ)):
    g = standard_lie(name, ring)
    rows = pbw_verify(g, 4)
    print(f"{name} over {ring}:")
    for x in rows:
        print(f"  n={x.degree}  gr rank {x.gr_rank}  S^n rank {x.sym_rank}  torsion "
              f"{x.torsion or '-'}  iso {x.is_iso}")
    print("  deformation route:", "agrees" if pbw_via_deformation(g, 4).passed else "DISAGREES")
