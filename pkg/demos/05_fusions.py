"""Strongly regular fusions indexed by a permutation sigma of F_4."""

from collections import Counter

from srscheme.construct import build_scheme
from srscheme.field import FieldSpec
from srscheme.fusion import all_permutations, fusion_run
from srscheme.spectra import spectral_data

s = build_scheme(FieldSpec(2))
sd = spectral_data(s)

cases = Counter()
for sigma in all_permutations(4):
    result = fusion_run(s, sd, sigma)
    cases[result["case"]] += 1
    assert result["status"] == "pass"
print("24 permutations:", dict(cases))

# a sigma with a PAut partner groups E_{b,1} with E_{tau(b),3}
result = fusion_run(s, sd, (0, 1, 3, 2))
print("sigma = (0, 1, 3, 2), tau =", result["tau"])
for row in result["eigenrows"]:
    print(f"  {row['theta']}  <- {' + '.join(row['idempotents'])}  (multiplicity {row['multiplicity']})")

# without a partner the sigma-twisted characters give their own rows
result = fusion_run(s, sd, (1, 0, 2, 3))
print("sigma = (1, 0, 2, 3):", result["case"], len(result["eigenrows"]), "rows")
