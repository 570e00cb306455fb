"""GF(4), its multiplication table, the characters of (F_4, +) and the Latin square of order 6."""

import numpy as np

from srscheme.field import FieldSpec, character_table, gh_table, paut_partner, verify_gh
from srscheme.latin import build_latin, factor_set

spec = FieldSpec(2)  # x^2 + x + 1 by default
print("field:", spec.describe())

# elements are bit-vectors: 0, 1, x, x+1 -> 0, 1, 2, 3
H = gh_table(spec)
print("multiplication table (a generalized Hadamard matrix GH(4, 1)):")
print(H)
print("GH(4,1)?", verify_gh(H, spec.q, 1))  # every row difference hits each element once

K = character_table(spec)
print("character table K, K K^T = 4 I:")
print(K)
assert np.array_equal(K @ K.T, 4 * np.eye(4, dtype=np.int64))

# sigma is the linear map (b1, b0) -> (b1, b1 + b0); its partner tau acts on the characters
sigma = (0, 1, 3, 2)
print("PAut partner of", sigma, "->", paut_partner(spec, sigma))
print("PAut partner of the swap (1, 0, 2, 3) ->", paut_partner(spec, (1, 0, 2, 3)))

# one round of the circle method per field element, the last round is y, diagonal x
L = build_latin(spec)
print("symmetric Latin square of order q + 2:")
print(L.to_text())

P = factor_set(L)
print("P_y is a fixed-point-free involution:", not np.diag(P["y"]).any())
