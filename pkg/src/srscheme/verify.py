"""Certification of decompositions, strongly regular graphs and intersection numbers."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import exact
from .construct import InvariantViolation, Scheme, label_str

SCHEMA_VERSION = 1


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None

    def to_json(self) -> dict:
        return {"check": self.name, "status": "pass" if self.passed else "fail", "witness": self.witness}


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    def add(self, name: str, passed: bool, witness=None) -> bool:
        passed = bool(passed)
        if not passed and witness is None:
            witness = "no witness recorded"
        self.checks.append(Check(name, passed, witness if not passed else None))
        return passed

    def extend(self, other: VerificationReport) -> VerificationReport:
        self.checks.extend(other.checks)
        return self

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> list:
        return [c.to_json() for c in self.checks]


def first_mismatch(a: np.ndarray, b: np.ndarray):
    """Coordinates and values of the first differing entry, or None."""
    diff = np.argwhere(a != b)
    if diff.size == 0:
        return None
    pos = tuple(int(x) for x in diff[0])
    return {"position": list(pos), "got": int(a[pos]), "expected": int(b[pos])}


def verify_commutative_decomposition(mats, names=None, *, threads: int = 1) -> VerificationReport:
    """A_0 = I, sum = J, each symmetric, all pairs commute."""
    report = VerificationReport()
    mats = [exact.as_int(m) for m in mats]
    names = names or [f"A{i}" for i in range(len(mats))]
    v = mats[0].shape[0]
    if any(m.shape != (v, v) for m in mats):
        raise ValueError("matrices must be square of equal order")
    report.add("first matrix is the identity", np.array_equal(mats[0], exact.identity(v)),
               first_mismatch(mats[0], exact.identity(v)))
    total = sum(mats[1:], mats[0].copy())
    report.add("matrices sum to J", np.array_equal(total, exact.ones(v)), first_mismatch(total, exact.ones(v)))
    for name, m in zip(names, mats):
        report.add(f"{name} symmetric", np.array_equal(m, m.T), first_mismatch(m, m.T))
    bad = []
    for (i, a), (j, b) in itertools.combinations(enumerate(mats), 2):
        # both symmetric, so BA = (AB)^T and commuting means AB is symmetric
        ab = exact.mat_mul(a, b, threads=threads)
        if not np.array_equal(ab, ab.T):
            bad.append({"pair": [names[i], names[j]], **first_mismatch(ab, ab.T)})
            break
    report.add("pairwise commutation", not bad, bad[0] if bad else None)
    return report


def verify_srg(a, v: int, k: int, lam: int, mu: int, *, threads: int = 1) -> bool:
    """True iff A^2 = kI + lam A + mu (J - I - A) and every row sum is k."""
    a = exact.as_int(a)
    if a.shape != (v, v):
        raise ValueError(f"adjacency matrix has shape {a.shape}, expected ({v}, {v})")
    if not np.isin(a, (0, 1)).all() or not np.array_equal(a, a.T) or np.any(np.diag(a)):
        raise ValueError("adjacency matrix must be symmetric 0/1 with zero diagonal")
    if np.any(a.sum(axis=1) != k):
        return False
    eye = exact.identity(v)
    expected = k * eye + lam * a + mu * (exact.ones(v) - eye - a)
    return bool(np.array_equal(exact.mat_mul(a, a, threads=threads), expected))


@dataclass(eq=False)
class IntersectionTensor:
    labels: list
    valencies: list
    p: np.ndarray  # p[i, j, k]; -1 marks pairs that were not computed
    computed: np.ndarray  # bool mask over (i, j)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "labels": [label_str(l) for l in self.labels],
            "valencies": list(self.valencies),
            "p": self.p.tolist(),
        }

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh)


def class_coordinates(index: np.ndarray, reps, mat: np.ndarray):
    """Read ``mat`` as a combination of classes; return (coefficients, witness or None)."""
    coeffs = np.array([mat[r, c] for r, c in reps])
    expanded = coeffs[index]
    return coeffs, first_mismatch(mat, expanded)


def sample_pairs(n: int, count: int, seed: int = 0) -> list[tuple[int, int]]:
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    rng = np.random.default_rng(seed)
    picked = rng.choice(len(pairs), size=min(count, len(pairs)), replace=False)
    return [pairs[t] for t in sorted(picked)]


def intersection_numbers(s: Scheme, pairs=None, *, threads: int = 1) -> IntersectionTensor:
    """p_{ij}^k read off one position per class, then the full product re-verified.

    ``pairs`` restricts the computation to the given ``(i, j)`` with ``i <= j``
    (spot tier); by default all pairs are computed.
    """
    n = len(s.labels)
    p = np.full((n, n, n), -1, dtype=np.int64)
    computed = np.zeros((n, n), dtype=bool)
    pairs = [(i, j) for i in range(n) for j in range(i, n)] if pairs is None else pairs
    cache = {}

    def mat(k):
        if k not in cache:
            cache[k] = s.matrix(k)
        return cache[k]

    for i, j in pairs:
        prod = exact.mat_mul(mat(i), mat(j), threads=threads)
        # symmetric factors: A_j A_i = (A_i A_j)^T, so this certifies p_ij = p_ji
        if i != j and not np.array_equal(prod, prod.T):
            raise InvariantViolation(f"{label_str(s.labels[i])} and {label_str(s.labels[j])} do not commute")
        coeffs, witness = class_coordinates(s.index, s.representatives, prod)
        if witness is not None:
            raise InvariantViolation(
                f"{label_str(s.labels[i])} * {label_str(s.labels[j])} is not in the class span: {witness}"
            )
        p[i, j] = p[j, i] = coeffs
        computed[i, j] = computed[j, i] = True
        if len(cache) > 8:
            cache.clear()
    return IntersectionTensor(list(s.labels), list(s.valencies), p, computed)


def tensor_invariants(t: IntersectionTensor) -> VerificationReport:
    """Integrality/nonnegativity, symmetry, valency sums and p_{ij}^0."""
    report = VerificationReport()
    k = np.array(t.valencies, dtype=np.int64)
    n = len(k)
    mask = t.computed
    neg = [(i, j) for i, j in zip(*np.nonzero(mask)) if np.any(t.p[i, j] < 0)]
    report.add("intersection numbers nonnegative integers", not neg, [int(x) for x in neg[0]] if neg else None)
    asym = [(i, j) for i, j in zip(*np.nonzero(mask & mask.T)) if not np.array_equal(t.p[i, j], t.p[j, i])]
    report.add("p symmetric in (i, j)", not asym, [int(x) for x in asym[0]] if asym else None)
    bad_val = [(int(i), int(j)) for i, j in zip(*np.nonzero(mask)) if int(t.p[i, j] @ k) != int(k[i] * k[j])]
    report.add("sum_k p_ij^k k_k = k_i k_j", not bad_val, bad_val[0] if bad_val else None)
    bad0 = [(int(i), int(j)) for i, j in zip(*np.nonzero(mask))
            if t.p[i, j, 0] != (k[i] if i == j else 0)]
    report.add("p_ij^0 = delta_ij k_i", not bad0, bad0[0] if bad0 else None)
    if n and t.computed.all():
        report.add("tensor complete", True)
    return report


def proposition_product(q: int, left, right, printed: bool = False) -> dict:
    """Closed form of A_left * A_right in the class basis, A_{0,1} alias expanded.

    Returns ``{label: coefficient}`` over class labels. Products with a type-0
    factor have coefficient 1 since A_{alpha,0} is a permutation matrix;
    ``printed=True`` reproduces the variant with coefficient q instead, which
    violates sum_k p_ij^k k_k = k_i k_j.
    """
    one = q if printed else 1
    (a, i), (b, j) = left, right
    if i > j:
        (a, i), (b, j) = (b, j), (a, i)
    out: dict = {}

    def add(label, c):
        if label[1] == 1 and label[0] == 0:
            for g in range(q):
                out[(g, 0)] = out.get((g, 0), 0) + c
        else:
            out[label] = out.get(label, 0) + c

    if i == 0:
        if j in (0, 3):
            add((a ^ b, j), one)
        else:
            add((b, j), one)
    elif (i, j) in ((1, 1), (2, 2)):
        add((a ^ b, 1), q)
    elif (i, j) == (1, 2):
        add((a ^ b, 2), q)
    elif j == 3 and i in (1, 2):
        for g in range(q):
            add((g, 3), 1)
    else:  # (3, 3)
        add((a ^ b, 0), q * q)
        for g in range(q):
            add((g, 0), -q)
            add((g, 1), q)
            add((g, 2), q)
            add((g, 3), q - 2)
    return {lab: c for lab, c in out.items() if c != 0}


def proposition_tensor(s: Scheme, printed: bool = False) -> np.ndarray:
    n = len(s.labels)
    q = s.spec.q
    p = np.zeros((n, n, n), dtype=np.int64)
    for i, li in enumerate(s.labels):
        for j, lj in enumerate(s.labels):
            for lab, c in proposition_product(q, li, lj, printed).items():
                p[i, j, s.k(lab)] = c
    return p


def check_proposition(s: Scheme, t: IntersectionTensor, printed: bool = False) -> VerificationReport:
    """Compare every computed p_{ij}^k with the closed forms."""
    report = VerificationReport()
    expected = proposition_tensor(s, printed)
    report.add("closed forms are nonnegative", bool((expected >= 0).all()))
    mism = None
    for i, j in zip(*np.nonzero(t.computed)):
        if not np.array_equal(t.p[i, j], expected[i, j]):
            k = int(np.argmax(t.p[i, j] != expected[i, j]))
            mism = {
                "pair": [label_str(s.labels[i]), label_str(s.labels[j])],
                "class": label_str(s.labels[k]),
                "got": int(t.p[i, j, k]),
                "expected": int(expected[i, j, k]),
            }
            break
    report.add("intersection tensor matches closed forms", mism is None, mism)
    return report
