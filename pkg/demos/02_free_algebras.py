"""Free algebras: ranks by degree, the universal property on generators, and
derivations out of a free algebra determined by their values on generators."""

from operad_forge import QQ, build_standard, derivations, free_algebra
from operad_forge.algebra import extend_from_generators, restrict_to_generators
from operad_forge.amodule import regular_module, trivial_module

for name in ("com", "ass", "lie"):
    F = free_algebra(build_standard(name, QQ, 4), 2, 4)
    print(f"Free_{name}(x1, x2) ranks by degree:", [len(F.basis_of_degree(d)) for d in range(5)])

F = free_algebra(build_standard("ass", QQ, 4), 2, 4)
x1, x2 = F.basis_of_degree(1)
images = [{x2: QQ.one}, {x1: QQ.one, x2: QQ.one}]
hom = extend_from_generators(F, F, images)
print("x1 -> x2, x2 -> x1 + x2 extends to an algebra map:",
      hom.check().passed)
print("restriction recovers the generator images:", restrict_to_generators(hom) == images)

for M, label in ((regular_module(F), "F"), (trivial_module(F, 2, 1), "k^2 (degree 1)")):
    ders = derivations(F, M, 0)
    print(f"degree-0 derivations F -> {label}: rank {ders.rank}"
          f" = 2 * rank {label} in degree 1 = {2 * len(M.basis_of_degree(1))}")
