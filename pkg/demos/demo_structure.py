"""Structure theory walkthrough: build a scrambled symplectic t-module and
recover its invariant type.

Every symplectic space with a nilpotent self-dual operator t splits into
standard planes H_k; the splitting is computed constructively and the type
partition (k_1 >= ... >= k_n) is a complete isomorphism invariant.
"""
import random

from sntmod import linalg as la
from sntmod.fields import QQ
from sntmod.sntmodule import SntModule, decompose, jordan_type, standard_module

rng = random.Random(2024)

print("Plant a module of type (3, 1) and scramble it by a base change.")
ks = (3, 1)
M0 = standard_module(QQ, ks)
n = M0.dim

while True:
    P = [[QQ(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
    try:
        Pinv = la.inverse(QQ, P)
        break
    except ValueError:
        continue

M = SntModule(QQ,
              la.mat_mul(la.mat_mul(P, M0.t), Pinv),
              la.mat_mul(la.mat_mul(P, M0.gram), la.transpose(P)))
print("validate():", M.validate() or "ok")

got, B = decompose(M)
print("recovered type:", got)

print("Jordan type of t (independent oracle, must be the doubled type):",
      jordan_type(QQ, M.t))

std = standard_module(QQ, got)
print("iso transports t exactly:",
      la.mat_eq(la.mat_mul(B, M.t), la.mat_mul(std.t, B)))
print("iso transports the symplectic form exactly:",
      la.mat_eq(la.mat_mul(la.mat_mul(B, M.gram), la.transpose(B)), std.gram))
