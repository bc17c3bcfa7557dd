"""The enveloping algebra P_A whose modules are A-modules: for associative A
it is A (x) A^op; for a Lie algebra it is U(g), compared with straightening."""

from operad_forge import QQ, enveloping, standard_lie
from operad_forge.algebra import lie_as_algebra
from operad_forge.amodule import compare_with_tensor_oracle
from operad_forge.inputs import algebra_from_block, parse_text
from operad_forge.pbw import enveloping_by_rewriting

DUAL = """ring QQ
algebra D {
  operad ass
  basis one:0 x:1
  unit one
  product x x = 0
}
"""

A = algebra_from_block(parse_text(DUAL), 4)
P = enveloping(A, 4)
print("dual numbers: rank A =", A.rank, " rank P_A =", P.rank)
print(compare_with_tensor_oracle(P))

g = standard_lie("sl2", QQ)
P = enveloping(lie_as_algebra(g), 3, mode="filtered")
U = enveloping_by_rewriting(g, 3)
print("sl2: filtered ranks of P_g", P.filtered_ranks(), " of U(g)", U.filtered_ranks())
