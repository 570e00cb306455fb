import itertools

import numpy as np
import pytest

from srscheme import exact
from srscheme.construct import (
    R,
    InvariantViolation,
    adjacency,
    build_scheme,
    c_matrix,
    class_index_entrywise,
    clique_matrix,
    label_str,
    n_matrix,
    n_matrix_blocks,
    phi,
    scheme_labels,
)
from srscheme.field import FieldSpec
from srscheme.latin import X, Y, build_latin, factor_set

SPECS = [FieldSpec(m) for m in (1, 2, 3)]
SMALL = SPECS[:2]


@pytest.fixture(scope="module", params=[1, 2, 3], ids=lambda m: f"m{m}")
def scheme(request):
    return build_scheme(FieldSpec(request.param))


def test_phi_examples():
    assert np.array_equal(phi(FieldSpec(2), 0), exact.identity(4))
    assert np.array_equal(phi(FieldSpec(1), 1), R)
    spec = FieldSpec(3)
    for a in spec.elements:
        p = phi(spec, a)
        j, k = np.nonzero(p)
        assert ((j ^ k) == a).all() and len(j) == spec.q


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_phi_homomorphism(spec):
    for a, b in itertools.product(spec.elements, repeat=2):
        assert np.array_equal(phi(spec, a) @ phi(spec, b), phi(spec, a ^ b))


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_c_lemma(spec):
    q = spec.q
    syms = [*range(q), Y]
    Jq, Iq = exact.ones(q), exact.identity(q)
    assert not c_matrix(spec, X, 1 % q).any()
    for al in spec.elements:
        # (i)
        total = sum(c_matrix(spec, a, al) for a in syms)
        assert np.array_equal(total, q * exact.kron(Iq, phi(spec, al)) + exact.kron(Jq + phi(spec, al) - Iq, Jq))
    for a, al, al2 in itertools.product(syms, spec.elements, spec.elements):
        ca = c_matrix(spec, a, al)
        assert np.array_equal(ca, ca.T)
        # (ii)
        assert np.array_equal(ca @ c_matrix(spec, a, al2), q * c_matrix(spec, a, al ^ al2))
        # (iv), (v)
        shifted = exact.kron(Iq, phi(spec, al2)) @ ca
        assert np.array_equal(shifted, ca if a == Y else c_matrix(spec, a, al ^ al2))
    # (iii)
    for a, b in itertools.permutations(syms, 2):
        for al, al2 in itertools.product(spec.elements, repeat=2):
            assert np.array_equal(c_matrix(spec, a, al) @ c_matrix(spec, b, al2), exact.ones(q * q))


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_n_matrix_block_and_kronecker_forms_agree(spec):
    L = build_latin(spec)
    for al in spec.elements:
        assert np.array_equal(n_matrix(spec, L, al), n_matrix_blocks(spec, L, al))


@pytest.mark.parametrize("spec", SPECS, ids=str)
def test_design_identities(spec):
    q = spec.q
    L = build_latin(spec)
    v = (q + 2) * q * q
    I, J = exact.identity(v), exact.ones(v)
    Ns = [n_matrix(spec, L, a) for a in spec.elements]
    for N in Ns:
        assert np.array_equal(N, N.T)
        assert np.array_equal(exact.mat_mul(N, N), q * q * I + q * J)
    # full product formula on a few pairs
    Jq, Iqq = exact.ones(q), exact.identity(q * (q + 2))
    for a, b in [(0, 1 % q), (q - 1, 1 % q)]:
        expected = (
            q * q * exact.kron(Iqq, phi(spec, a ^ b))
            + q * exact.kron(exact.kron(exact.identity(q + 2), phi(spec, a ^ b)), Jq)
            + q * exact.kron(exact.ones(q * (q + 2)) - Iqq, Jq)
        )
        assert np.array_equal(exact.mat_mul(Ns[a], Ns[b]), expected)


def test_clique_matrix_shape():
    c = clique_matrix(FieldSpec(1))
    assert c.shape == (16, 16) and (c.sum(axis=1) == 3).all() and not np.diag(c).any()


def test_scheme_sizes(scheme):
    q = scheme.spec.q
    assert scheme.v == (q + 2) * q * q
    assert scheme.class_count == 4 * q - 2
    assert len(scheme.labels) == len(set(scheme.labels))


def test_scheme_partition_and_valencies(scheme):
    total = sum(scheme.matrices())
    assert np.array_equal(total, exact.ones(scheme.v))
    assert np.array_equal(scheme.matrix((0, 0)), exact.identity(scheme.v))
    q = scheme.spec.q
    for lab, k in zip(scheme.labels, scheme.valencies):
        assert (scheme.matrix(lab).sum(axis=1) == k).all()
        if lab[1] == 3:
            assert k == q * q


def test_alias_sum(scheme):
    q = scheme.spec.q
    L, spec = scheme.latin, scheme.spec
    a01 = adjacency(spec, L, 0, 1)
    assert np.array_equal(scheme.a01(), a01)
    assert np.array_equal(sum(scheme.matrix((g, 0)) for g in range(q)), a01)


def test_classes_match_definitions(scheme):
    spec, L = scheme.spec, scheme.latin
    P = factor_set(L)
    for al in spec.elements:
        N = n_matrix(spec, L, al, P)
        assert np.array_equal(scheme.matrix((al, 3)) + scheme.matrix((al, 2)), N)


def test_class_index_matches_entrywise_formula(scheme):
    assert np.array_equal(class_index_entrywise(scheme.spec, scheme.latin), scheme.index)


@pytest.mark.parametrize("relabel", [[2, 0, 1], [1, 2, 0]])
def test_relabelled_latin_square_still_builds(relabel):
    s = build_scheme(FieldSpec(1), relabel)
    assert np.array_equal(class_index_entrywise(s.spec, s.latin), s.index)


def test_labels_and_names():
    labels = scheme_labels(FieldSpec(1))
    assert labels[0] == (0, 0) and len(labels) == 7
    assert label_str((1, 3)) == "A_1_3"


def test_invariant_violation_names_condition(monkeypatch):
    import srscheme.construct as construct

    real = construct.adjacency

    def broken(spec, L, alpha, i, factors=None):
        a = real(spec, L, alpha, i, factors)
        if i == 2:
            a = a.copy()
            a[0, 1] = 1 - a[0, 1]
        return a

    monkeypatch.setattr(construct, "adjacency", broken)
    with pytest.raises(InvariantViolation, match="symmetric"):
        construct.build_scheme(FieldSpec(1))
