"""Primitive idempotents, both eigenmatrices and the Krein numbers, exactly, at q = 2."""

import numpy as np

from srscheme.construct import build_scheme, label_str
from srscheme.field import FieldSpec
from srscheme.spectra import E1, idem_str, spectral_data

s = build_scheme(FieldSpec(1))
sd = spectral_data(s)
print("all checks pass:", sd.report.ok)

print("idempotent multiplicities:")
for lab, m in zip(sd.labels, sd.multiplicities):
    E = sd.E(lab)
    print(f"  {idem_str(lab)}: trace {m}, denominator {E.den}")

cols = [label_str(l) for l in s.labels]
print("first eigenmatrix P (rows E, columns A):")
print("      ", cols)
for lab, row in zip(sd.labels, sd.P):
    print(f"  {idem_str(lab):6}", row.tolist())

v = s.v
print("P Q = v I:", np.array_equal(sd.P @ sd.Q, v * np.eye(len(sd.labels), dtype=np.int64)))

# E_1 o E_1 = (1/v)(q/2 E_0 + (q-2)/2 E_1); the second coefficient vanishes at q = 2
i = sd.labels.index(E1)
print("q_{1,1}^k:", {idem_str(sd.labels[k]): str(x) for k, x in enumerate(sd.krein[i, i]) if x})
print("all Krein numbers nonnegative:", all(x >= 0 for x in sd.krein.flat))
