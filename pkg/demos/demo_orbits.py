"""Orbit classification demo: invariants, transport, and the exhaustive
cross-check over a small finite field.

Elements of M_- ⊗ V under the orthogonal group over F_q[t]/(t^k) are
classified by the pair (image submodule, symmetric tensor); the census
below compares that classification with raw orbit enumeration.
"""
import random

from sntmod.fields import GF
from sntmod.orbits import (TensorSpace, brute_force_orbits, hyperbolic_plane,
                           invariant_partition, orbit_invariant,
                           random_orthogonal_ring, transport)

F3 = GF(3)
V = hyperbolic_plane(F3)
sp = TensorSpace(F3, (2,), V)

print("Setting: M_- of type (2), V a hyperbolic plane, everything over F_3.")
print()

rng = random.Random(7)
x = sp.random(rng)
print("a random element x has invariant:")
inv = orbit_invariant(x)
print("  image type:", inv.partition)
print("  symmetric tensor coords:", inv.coords)

g0 = random_orthogonal_ring(sp, rng)
y = x.act(g0)
g = transport(x, y)
print("transport(x, x·g0) found a group element:", g is not None,
      "and x·g = y:", x.act(g).key() == y.key())
print()

orbits = brute_force_orbits(sp)
classes = invariant_partition(sp)
print("brute-force orbits:", len(orbits))
print("invariant classes: ", len(classes))
print("the partitions coincide exactly:",
      set(classes.values()) == set(orbits))
print()
print("orbit sizes:", sorted(len(o) for o in orbits))
