"""The automorphism group Sp(M,t): block structure and the ring model.

For a homogeneous module (n copies of H_k) the group is the symplectic
group over F[t]/(t^k).  For mixed types the mod-t reduction is block
triangular over the homogeneous levels, with residue symplectic groups on
the diagonal; the kernel of the full reduction is the unipotent radical.
"""
from sntmod.fields import QQ, GF
from sntmod.sntmodule import standard_module
from sntmod.spgroup import (block_profile, group_closure, random_element,
                            sp_group_order, sp_ring_generators,
                            unipotent_radical_test)
from sntmod.tpoly import tmat_key, tmat_mul

F3 = GF(3)

print("Mixed type (2, 1) over Q: sample elements and inspect their blocks.")
M = standard_module(QQ, (2, 1))
for seed in range(3):
    g = random_element(M, seed)
    bp = block_profile(M, g)
    print("  seed %d: levels %s, triangular %s, residue-symplectic %s, "
          "in the radical %s" % (seed, bp.levels, bp.upper_triangular_ok(),
                                 bp.diagonal_symplectic_ok(),
                                 unipotent_radical_test(M, g)))

print()
print("Homogeneous H_2 over F_3: the group is Sp_2(F_3[t]/(t^2)).")
gens = sp_ring_generators(F3, 1, 2)
grp = group_closure(gens, tmat_mul, tmat_key, 10 ** 4)
print("  exhaustive closure:", len(grp), "elements")
print("  kernel-lifting count |Sp_2(F_3)| * 3^3 =", sp_group_order(3, 1, 2))

reduced = {tuple(tuple(x.coeffs[0].v for x in row) for row in g) for g in grp}
print("  image of reduction mod t:", len(reduced),
      "= |Sp_2(F_3)| =", sp_group_order(3, 1, 1))
