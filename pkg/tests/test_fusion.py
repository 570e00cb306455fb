import itertools
from collections import Counter

import numpy as np
import pytest

from srscheme import exact
from srscheme.construct import InvariantViolation, build_scheme
from srscheme.field import FieldSpec, is_paut_pair
from srscheme.fusion import (
    all_permutations,
    block_coefficients,
    classify_sigma,
    corollary_groups,
    fuse,
    fused_eigenmatrix,
    fusion_run,
    sample_permutations,
)
from srscheme.spectra import E0, E1, spectral_data


@pytest.fixture(scope="module", params=[1, 2], ids=lambda m: f"m{m}")
def pair(request):
    s = build_scheme(FieldSpec(request.param))
    return s, spectral_data(s)


@pytest.fixture(scope="module")
def m3():
    s = build_scheme(FieldSpec(3))
    return s, spectral_data(s)


def test_identity_m1_gives_four_rows():
    s = build_scheme(FieldSpec(1))
    sd = spectral_data(s)
    fd = fuse(s, (0, 1))
    assert len(fd.blocks) == 4 and fd.report.ok
    rows = fused_eigenmatrix(fd, sd)
    assert sorted(r.theta for r in rows) == sorted([(1, 3, 6, 6), (1, 3, -2, -2), (1, -1, 2, -2), (1, -1, -2, 2)])
    assert sorted(r.multiplicity for r in rows) == [1, 3, 6, 6]


def test_blocks_partition(pair):
    s, _ = pair
    for sigma in itertools.islice(all_permutations(s.spec.q), 6):
        fd = fuse(s, sigma)
        assert np.array_equal(sum(fd.blocks), exact.ones(s.v))


def test_row_examples(pair):
    s, sd = pair
    q = s.spec.q
    fd = fuse(s, tuple(range(q)))
    rows = {tuple(r.constituents): r.theta for r in fused_eigenmatrix(fd, sd)}
    assert rows[(E0,)] == (1, q * q - 1, *[q * q + q] * q)
    assert rows[(E1, (0, 2))] == (1, q * q - 1, *[-q] * q)


def test_all_sigma(pair):
    s, sd = pair
    q = s.spec.q
    cases = Counter()
    for sigma in all_permutations(q):
        result = fusion_run(s, sd, sigma)
        assert result["status"] == "pass", result["checks"]
        cases[result["case"]] += 1
        if result["tau"] is not None:
            assert is_paut_pair(s.spec, sigma, result["tau"])
        bound = 2 * q if result["case"] == "paut" else 2 + 4 * (q - 1)
        assert q + 2 <= len(result["eigenrows"]) <= bound
        assert sum(r["multiplicity"] for r in result["eigenrows"]) == s.v
    if q == 4:
        assert cases == {"paut": 6, "non-paut": 18}


def test_classify():
    spec = FieldSpec(2)
    assert classify_sigma(spec, (0, 1, 2, 3)) == ("paut", (0, 1, 2, 3))
    assert classify_sigma(spec, (1, 0, 2, 3)) == ("non-paut", None)


def test_corollary_table_merges_coinciding_rows():
    spec = FieldSpec(1)
    # at q = 2 the swap sigma has no partner and its sigma-twisted rows coincide with the plain ones
    groups = corollary_groups(spec, (1, 0))
    assert len(groups) == 4
    assert any(len(labs) == 2 and (1, 1) in labs and (1, 4) in labs for labs in groups.values())


def test_block_coefficients():
    blocks = block_coefficients(2, (1, 0))
    assert [name for name, _ in blocks] == ["B_id", "B_cliq", "B_0", "B_1"]
    assert blocks[2][1] == {(0, 2): 1, (1, 3): 1}


def test_bad_sigma_rejected():
    s = build_scheme(FieldSpec(1))
    with pytest.raises(ValueError):
        fuse(s, (0, 0))


def test_broken_block_raises(monkeypatch):
    import srscheme.fusion as fusion

    s = build_scheme(FieldSpec(1))
    monkeypatch.setattr(fusion, "block_coefficients", lambda q, sigma: [("B_id", {(0, 0): 1}), ("B_x", {(1, 3): 1})])
    with pytest.raises(InvariantViolation):
        fusion.fuse(s, (0, 1))


def test_sample_permutations_deterministic():
    a = sample_permutations(8, 5)
    assert a == sample_permutations(8, 5)
    assert a[0] == tuple(range(8)) and all(sorted(p) == list(range(8)) for p in a)


def test_sampled_sigma_m3(m3):
    """100 seeded permutations of F_8, each a valid strongly regular decomposition."""
    s, sd = m3
    cases = Counter()
    for sigma in sample_permutations(8, 100):
        result = fusion_run(s, sd, sigma)
        assert result["status"] == "pass", (sigma, result["checks"])
        cases[result["case"]] += 1
    assert cases["paut"] >= 1 and cases["non-paut"] >= 1
