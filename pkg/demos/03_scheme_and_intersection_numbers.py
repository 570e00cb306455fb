"""The 14-class scheme at q = 4 and its intersection numbers."""

import numpy as np

from srscheme.construct import build_scheme, label_str
from srscheme.field import FieldSpec
from srscheme.verify import check_proposition, intersection_numbers, proposition_product, tensor_invariants

s = build_scheme(FieldSpec(2))
print(f"v = {s.v}, classes = {s.class_count}")
for lab, k in zip(s.labels, s.valencies):
    print(f"  {label_str(lab)}: valency {k}")

# A_{0,1} is not a class: it is the sum of the q classes A_{g,0}
print("A_{0,1} = sum_g A_{g,0}:", np.array_equal(s.a01(), sum(s.matrix((g, 0)) for g in range(4))))

t = intersection_numbers(s)  # every product, read off and re-verified entrywise
print("invariants:", [(c.name, c.passed) for c in tensor_invariants(t).checks])

# A_{a,3} A_{b,3} in the class basis once A_{0,1} is expanded
i, j = s.k((1, 3)), s.k((2, 3))
print("p_{(1,3),(2,3)}^k:", {label_str(s.labels[k]): int(c) for k, c in enumerate(t.p[i, j]) if c})

# A_{alpha,0} is a permutation matrix, so products with it carry coefficient 1
print("A_1_0 A_2_3 =", proposition_product(4, (1, 0), (2, 3)))
print("closed forms match:", check_proposition(s, t).ok)
bad = check_proposition(s, t, printed=True).failures()[0]
print("with coefficient q instead:", bad.witness)
