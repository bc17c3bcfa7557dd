"""Exact computer algebra for operads, their algebras and modules, Hochschild
cohomology, graded deformations and enveloping algebras over QQ, ZZ and GF(p)."""

from .errors import ForgeError
from .linalg import QQ, ZZ, GroundRing, parse_ring
from .operad import FinOperad, build_standard, check_axioms
from .algebra import (GradedAlgebra, LieAlgebraData, free_algebra, jacobiator,
                      polynomial_algebra, standard_lie, symmetric_algebra)
from .amodule import AModule, derivations, enveloping, square_zero_extension
from .homology import ext_by_cochains, ext_by_koszul, koszul_exactness, cohomology_H
from .deformation import level_one_from_bracket, prolong, specialize
from .pbw import enveloping_by_rewriting, pbw_verify, pbw_via_deformation

__version__ = "0.1.0"

__all__ = [
    "ForgeError", "QQ", "ZZ", "GroundRing", "parse_ring", "FinOperad", "build_standard",
    "check_axioms", "GradedAlgebra", "LieAlgebraData", "free_algebra", "jacobiator",
    "polynomial_algebra", "standard_lie", "symmetric_algebra", "AModule", "derivations",
    "enveloping", "square_zero_extension", "ext_by_cochains", "ext_by_koszul",
    "koszul_exactness", "cohomology_H", "level_one_from_bracket", "prolong", "specialize",
    "enveloping_by_rewriting", "pbw_verify", "pbw_via_deformation", "__version__",
]
