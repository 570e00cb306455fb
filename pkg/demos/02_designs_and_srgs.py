"""The symmetric designs N_alpha and the strongly regular graphs they give, at q = 4."""

import numpy as np

from srscheme import exact
from srscheme.construct import build_scheme, c_matrix, clique_matrix, phi
from srscheme.field import FieldSpec
from srscheme.verify import verify_commutative_decomposition, verify_srg

spec = FieldSpec(2)
q = spec.q
s = build_scheme(spec)
v = s.v
print(f"q = {q}, v = (q+2) q^2 = {v}")

# phi(alpha) is the regular permutation representation of (F_q, +)
print("phi(3):")
print(phi(spec, 3))

# C_{a,alpha} for a in F_q are the q^2 x q^2 blocks; C_{a,alpha} C_{a,alpha'} = q C_{a,alpha+alpha'}
C = c_matrix(spec, 2, 1)
assert np.array_equal(C @ c_matrix(spec, 2, 3), q * c_matrix(spec, 2, 1 ^ 3))

for alpha in range(q):
    N = s.n_matrix(alpha)
    square = exact.mat_mul(N, N)
    design = np.array_equal(square, q * q * exact.identity(v) + q * exact.ones(v))
    srg = verify_srg(N, v, q * q + q, q, q)
    print(f"N_{alpha}: symmetric={np.array_equal(N, N.T)}, N^2 = q^2 I + q J: {design}, SRG(96, 20, 4, 4): {srg}")

cliques = clique_matrix(spec)
print("clique graph SRG(96, 15, 14, 0):", verify_srg(cliques, v, q * q - 1, q * q - 2, 0))

mats = [exact.identity(v), *[s.n_matrix(a) for a in range(q)], cliques]
report = verify_commutative_decomposition(mats)
print("commutative strongly regular decomposition:", report.ok)
