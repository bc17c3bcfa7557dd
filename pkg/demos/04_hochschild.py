"""Ext of the polynomial algebra S(V) into its augmentation ideal, computed from
normalized bar cochains and from the Koszul resolution. The two agree, and both
match Hom(Lambda^n V, S_+)."""

from math import comb

from operad_forge import QQ, ext_by_cochains, ext_by_koszul, polynomial_algebra
from operad_forge.amodule import augmentation_ideal

r = 2
A = polynomial_algebra(QQ, ["x", "y"], 6, "ass")
M = augmentation_ideal(A)
print(" n   j  cochain  koszul  closed form")
for n in (1, 2, 3):
    for j in (-2, -1, 0, 1):
        c = ext_by_cochains(A, M, n, j).rank
        k = ext_by_koszul(A, M, n, j).rank
        d = n + j
        closed = comb(r, n) * comb(d + r - 1, d) if d >= 1 else 0
        print(f"{n:2} {j:3} {c:8} {k:7} {closed:12}")
