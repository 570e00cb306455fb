"""Design matrices N_alpha and the classes A_{alpha,i} of the association scheme.

Vertices are triples ``(r, beta, j)`` flattened as ``r * q**2 + beta * q + j``
where ``r`` indexes the rows of the Latin square and ``beta, j`` are field
elements.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import exact
from .field import FieldSpec, gh_table
from .latin import X, Y, LatinSquare, build_latin, factor_set

log = logging.getLogger(__name__)

R = np.array([[0, 1], [1, 0]], dtype=np.int64)


class InvariantViolation(AssertionError):
    """A construction or certification identity failed; carries a diagnostic."""


def phi(spec: FieldSpec, alpha: int) -> np.ndarray:
    """Permutation representation of (F_q, +): tensor product of R^bit over the bits of alpha.

    The most significant bit is the outermost factor, which makes
    ``phi(alpha)[j, k] == 1`` exactly when ``j ^ k == alpha``.
    """
    out = np.ones((1, 1), dtype=np.int64)
    for k in reversed(range(spec.m)):
        out = exact.kron(out, R if (alpha >> k) & 1 else exact.identity(2))
    return out


def c_matrix(spec: FieldSpec, a, alpha: int) -> np.ndarray:
    """Auxiliary q^2 x q^2 matrix C_{a,alpha} for a symbol a in F_q or {x, y}."""
    q = spec.q
    if a == X:
        return exact.zeros(q * q)
    if a == Y:
        return exact.kron(phi(spec, alpha), exact.ones(q))
    mul = gh_table(spec)
    phis = [phi(spec, g) for g in range(q)]
    out = exact.zeros(q * q)
    for b in range(q):
        for b2 in range(q):
            # characteristic two: -b + b2 == b ^ b2
            out[b * q : (b + 1) * q, b2 * q : (b2 + 1) * q] = phis[mul[a, b ^ b2] ^ alpha]
    return out


def _blocks(spec: FieldSpec, alpha: int) -> dict:
    return {a: c_matrix(spec, a, alpha) for a in [*range(spec.q), Y]}


def n_matrix(spec: FieldSpec, L: LatinSquare, alpha: int, factors=None) -> np.ndarray:
    """N_alpha as the Kronecker sum of P_a (x) C_{a,alpha} over a in F_q and y."""
    factors = factor_set(L) if factors is None else factors
    q = spec.q
    out = exact.zeros((q + 2) * q * q)
    for a, c in _blocks(spec, alpha).items():
        exact.kron_add(out, factors[a], c)
    return out


def n_matrix_blocks(spec: FieldSpec, L: LatinSquare, alpha: int) -> np.ndarray:
    """N_alpha assembled block by block as (C_{L(a,a'),alpha}); cross-check for n_matrix."""
    q2 = spec.q * spec.q
    cs = _blocks(spec, alpha)
    cs[X] = exact.zeros(q2)
    return np.block([[cs[L[r, s]] for s in range(L.n)] for r in range(L.n)])


def clique_matrix(spec: FieldSpec) -> np.ndarray:
    """I_{q+2} (x) (J_{q^2} - I_{q^2}): the q + 2 disjoint cliques."""
    q2 = spec.q * spec.q
    return exact.kron(exact.identity(spec.q + 2), exact.ones(q2) - exact.identity(q2))


def adjacency(spec: FieldSpec, L: LatinSquare, alpha: int, i: int, factors=None) -> np.ndarray:
    """A_{alpha,i} for i in 0..3 (i = 1 with alpha = 0 gives the non-class A_{0,1})."""
    q = spec.q
    factors = factor_set(L) if factors is None else factors
    v = (q + 2) * q * q
    if i == 0:
        return exact.kron(exact.identity(q * (q + 2)), phi(spec, alpha))
    cy = c_matrix(spec, Y, alpha)
    if i == 1:
        return exact.kron(exact.identity(q + 2), cy)
    if i == 2:
        return exact.kron(factors[Y], cy)
    if i == 3:
        out = n_matrix(spec, L, alpha, factors)
        exact.kron_add(out, -factors[Y], cy)
        return out
    raise ValueError(f"class type must be 0..3, got {i} (v={v})")


def scheme_labels(spec: FieldSpec) -> list[tuple[int, int]]:
    """Identity, then (a,0) by a, (b,1) for b != 0, (a,2), (a,3)."""
    q = spec.q
    return (
        [(a, 0) for a in range(q)]
        + [(b, 1) for b in range(1, q)]
        + [(a, 2) for a in range(q)]
        + [(a, 3) for a in range(q)]
    )


def valency(spec: FieldSpec, label) -> int:
    return {0: 1, 1: spec.q, 2: spec.q, 3: spec.q * spec.q}[label[1]]


def label_str(label) -> str:
    return f"A_{label[0]}_{label[1]}"


@dataclass(eq=False)
class Scheme:
    """Class partition of the vertex pairs, stored as one class-index matrix."""

    spec: FieldSpec
    latin: LatinSquare
    labels: list
    index: np.ndarray
    valencies: list = field(default_factory=list)

    @property
    def v(self) -> int:
        return self.index.shape[0]

    @property
    def class_count(self) -> int:
        """Number of non-identity classes."""
        return len(self.labels) - 1

    @cached_property
    def positions(self) -> dict:
        return {lab: k for k, lab in enumerate(self.labels)}

    @cached_property
    def representatives(self) -> list[tuple[int, int]]:
        """One (row, col) position inside each class."""
        _, first = np.unique(self.index.ravel(), return_index=True)
        return [divmod(int(f), self.v) for f in first]

    @cached_property
    def factors(self) -> dict:
        return factor_set(self.latin)

    def k(self, label) -> int:
        return self.positions[label]

    def matrix(self, label_or_k) -> np.ndarray:
        k = label_or_k if isinstance(label_or_k, (int, np.integer)) else self.k(label_or_k)
        return (self.index == k).astype(np.int64)

    def matrices(self) -> list[np.ndarray]:
        return [self.matrix(k) for k in range(len(self.labels))]

    def a01(self) -> np.ndarray:
        """A_{0,1} = sum of A_{g,0}; not a class."""
        return self.combine({(g, 0): 1 for g in range(self.spec.q)})

    def combine(self, coeffs: dict) -> np.ndarray:
        """Integer combination of classes, given as ``{label: coefficient}``."""
        vec = np.zeros(len(self.labels), dtype=np.int64)
        for lab, c in coeffs.items():
            if lab == (0, 1):
                for g in range(self.spec.q):
                    vec[self.k((g, 0))] += c
            else:
                vec[self.k(lab)] += c
        return vec[self.index]

    def n_matrix(self, alpha: int) -> np.ndarray:
        return n_matrix(self.spec, self.latin, alpha, self.factors)


def build_scheme(spec: FieldSpec, relabel=None) -> Scheme:
    """Construct every class, check 0/1, symmetry, valency and the partition of J_v."""
    L = build_latin(spec, relabel)
    factors = factor_set(L)
    q = spec.q
    v = (q + 2) * q * q
    labels = scheme_labels(spec)
    index = np.full((v, v), -1, dtype=np.int16)
    valencies = []
    for k, (alpha, i) in enumerate(labels):
        a = adjacency(spec, L, alpha, i, factors)
        name = label_str((alpha, i))
        if not np.isin(a, (0, 1)).all():
            raise InvariantViolation(f"{name} is not a 0/1 matrix")
        if not np.array_equal(a, a.T):
            raise InvariantViolation(f"{name} is not symmetric")
        kval = valency(spec, (alpha, i))
        sums = a.sum(axis=1)
        if np.any(sums != kval):
            raise InvariantViolation(f"{name} row sums {sorted(set(sums.tolist()))} != valency {kval}")
        support = a.astype(bool)
        if np.any(index[support] != -1):
            raise InvariantViolation(f"{name} overlaps an earlier class")
        index[support] = k
        valencies.append(kval)
        del a, support
    if np.any(index == -1):
        raise InvariantViolation("classes do not cover J_v")
    if not np.array_equal(index[np.diag_indices(v)], np.zeros(v)):
        raise InvariantViolation("A_{0,0} is not the identity")
    log.info("built scheme m=%d v=%d with %d classes", spec.m, v, len(labels) - 1)
    return Scheme(spec, L, labels, index, valencies)


def class_index_entrywise(spec: FieldSpec, L: LatinSquare) -> np.ndarray:
    """Class of every vertex pair from the coordinate formula; independent of the Kronecker build."""
    q = spec.q
    v = (q + 2) * q * q
    mul = gh_table(spec)
    labels = scheme_labels(spec)
    pos = {lab: k for k, lab in enumerate(labels)}
    u = np.arange(v)
    r, b, j = u // (q * q), (u // q) % q, u % q
    rr, ss = r[:, None], r[None, :]
    db = b[:, None] ^ b[None, :]
    dj = j[:, None] ^ j[None, :]
    sym = L.codes[rr, ss]
    out = np.full((v, v), -1, dtype=np.int64)

    lookup = np.full((4, q), -1, dtype=np.int64)
    for (a, i), k in pos.items():
        lookup[i, a] = k

    same = rr == ss
    out = np.where(same & (db == 0), lookup[0][dj], out)
    out = np.where(same & (db != 0), lookup[1][db], out)
    out = np.where(sym == L.y, lookup[2][db], out)
    field_sym = (sym < q) & ~same
    safe_sym = np.where(field_sym, sym, 0)
    out = np.where(field_sym, lookup[3][dj ^ mul[safe_sym, db]], out)
    return out
