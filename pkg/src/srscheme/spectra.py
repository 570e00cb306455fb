"""Primitive idempotents, eigenmatrices and Krein numbers, all in exact arithmetic.

Idempotent labels are pairs: ``(None, 0)`` for E_0, ``(None, 1)`` for E_1 and
``(beta, j)`` for E_{beta,j} with ``j`` in 1..4.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from .construct import InvariantViolation, Scheme, label_str
from .exact import ScaledMatrix
from .field import character
from .verify import SCHEMA_VERSION, VerificationReport, first_mismatch

log = logging.getLogger(__name__)

E0 = (None, 0)
E1 = (None, 1)


def idempotent_labels(q: int) -> list:
    return (
        [E0, E1]
        + [(b, 1) for b in range(1, q)]
        + [(a, 2) for a in range(q)]
        + [(b, 3) for b in range(1, q)]
        + [(b, 4) for b in range(1, q)]
    )


def idem_str(label) -> str:
    a, j = label
    return f"E_{j}" if a is None else f"E_{a}_{j}"


def f_matrix(s: Scheme, alpha: int, i: int) -> np.ndarray:
    """F_{alpha,i} = sum_g chi_alpha(g) A_{g,i}, using the alias A_{0,1} for g = 0, i = 1."""
    coeffs = {}
    for g in range(s.spec.q):
        coeffs[(g, i)] = coeffs.get((g, i), 0) + character(alpha, g)
    return s.combine(coeffs)


def idempotent_formulas(q: int) -> dict:
    """Each idempotent as ``{(alpha, i): coefficient}`` over F-matrices, coefficients rational."""
    v = (q + 2) * q * q
    h = Fraction(1, 2 * q * q)
    out = {
        E0: {(0, 1): Fraction(1, v), (0, 2): Fraction(1, v), (0, 3): Fraction(1, v)},
        E1: {(0, 1): Fraction(q, 2 * v), (0, 2): Fraction(q, 2 * v), (0, 3): Fraction(-1, v)},
    }
    for a in range(q):
        out[(a, 1)] = {(a, 1): h, (a, 2): h}
        out[(a, 2)] = {(a, 1): h, (a, 2): -h}
        out[(a, 3)] = {(a, 0): q * h, (a, 3): h}
        out[(a, 4)] = {(a, 0): q * h, (a, 3): -h}
    return out


def alias_expansion(q: int, label) -> dict:
    """Non-primitive E_{0,1}, E_{0,3}, E_{0,4} in terms of primitive idempotents.

    From A_{0,1} = q (E_0 + E_1 + sum_b E_{b,1} + sum_a E_{a,2}) and
    sum_g A_{g,3} = q^3 E_0 - 2 q^2 E_1.
    """
    a, j = label
    if a != 0 or j not in (1, 3, 4):
        return {label: Fraction(1)}
    if j == 1:
        return {E0: Fraction(1), E1: Fraction(1)}
    half = Fraction(1, 2)
    rest = {(b, 1): half for b in range(1, q)}
    rest.update({(a2, 2): half for a2 in range(q)})
    if j == 3:
        return {E0: Fraction(q + 1, 2), E1: -half, **rest}
    return {E0: Fraction(1 - q, 2), E1: Fraction(3, 2), **rest}


def printed_alias_expansion(q: int, label) -> dict:
    """The E_{0,3}, E_{0,4} expansions as printed alongside the idempotent list.

    Kept only so tests can show they disagree with the matrices.
    """
    a, j = label
    rest = {(g, 1): Fraction(1) for g in range(1, q)}
    if j == 3:
        return {E0: Fraction(q, 2) + 1, **rest}
    return {E0: 1 - Fraction(q, 2), E1: Fraction(2), **rest}


@dataclass(eq=False)
class SpectralData:
    labels: list
    idempotents: dict
    multiplicities: list
    class_labels: list
    report: VerificationReport = field(default_factory=VerificationReport)
    P: np.ndarray | None = None
    Q: np.ndarray | None = None
    krein: np.ndarray | None = None  # object array of Fraction, [i, j, k]
    class_sums: dict = field(default_factory=dict)

    @property
    def v(self) -> int:
        return sum(self.multiplicities)

    def E(self, label) -> ScaledMatrix:
        return self.idempotents[label]

    def eigen_json(self, which: str) -> dict:
        mat = self.P if which == "P" else self.Q
        rows, cols = (self.labels, self.class_labels) if which == "P" else (self.class_labels, self.labels)
        rname = idem_str if which == "P" else label_str
        cname = label_str if which == "P" else idem_str
        return {
            "schema_version": SCHEMA_VERSION,
            "row_labels": [rname(r) for r in rows],
            "col_labels": [cname(c) for c in cols],
            "entries": mat.tolist(),
        }

    def krein_json(self) -> dict:
        n = len(self.labels)
        return {
            "schema_version": SCHEMA_VERSION,
            "convention": "E_i o E_j = (1/v) sum_k q_ij^k E_k",
            "v": self.v,
            "labels": [idem_str(l) for l in self.labels],
            "q": [[[{"num": self.krein[i, j, k].numerator, "den": self.krein[i, j, k].denominator}
                    for k in range(n)] for j in range(n)] for i in range(n)],
        }

    def dump(self, directory) -> None:
        from pathlib import Path

        d = Path(directory)
        for name, payload in (("P.json", self.eigen_json("P")), ("Q.json", self.eigen_json("Q")),
                              ("krein.json", self.krein_json())):
            with open(d / name, "w") as fh:
                json.dump(payload, fh)


def _fail(report: VerificationReport, name: str, ok: bool, witness=None) -> None:
    if not report.add(name, ok, witness):
        raise InvariantViolation(f"{name}: {witness}")


def idempotents(s: Scheme, *, threads: int = 1) -> SpectralData:
    """Build the 4q - 1 idempotents and check E_iE_j = delta_ij E_i, sum = I, E_0 = J/v."""
    q, v = s.spec.q, s.v
    report = VerificationReport()
    fmats = {(a, i): f_matrix(s, a, i) for a in range(q) for i in range(4)}

    def from_f(coeffs: dict) -> ScaledMatrix:
        return exact.scaled_sum([(c, fmats[key]) for key, c in coeffs.items()], (v, v))

    formulas = idempotent_formulas(q)
    labels = idempotent_labels(q)
    E = {lab: from_f(formulas[lab]) for lab in labels}
    aliases = {lab: from_f(formulas[lab]) for lab in [(0, 1), (0, 3), (0, 4)]}

    _fail(report, "E_0 = J/v", E[E0].equals(ScaledMatrix(exact.ones(v), v)))
    zero = ScaledMatrix(exact.zeros(v))
    bad = None
    for i, li in enumerate(labels):
        for lj in labels[i:]:
            prod = E[li].matmul(E[lj], threads=threads)
            if not prod.equals(E[li] if li == lj else zero):
                bad = [idem_str(li), idem_str(lj)]
                break
        if bad:
            break
    _fail(report, "E_i E_j = delta_ij E_i", bad is None, bad)
    total = ScaledMatrix(exact.zeros(v))
    for lab in labels:
        total = total + E[lab]
    _fail(report, "sum of idempotents = I", total.equals(ScaledMatrix(exact.identity(v))))
    for lab, mat in aliases.items():
        combo = ScaledMatrix(exact.zeros(v))
        for part, c in alias_expansion(q, lab).items():
            combo = combo + E[part].scale(c)
        _fail(report, f"{idem_str(lab)} alias expansion", combo.equals(mat))

    traces = [E[lab].trace() for lab in labels]
    bad = [(idem_str(lab), str(t)) for lab, t in zip(labels, traces) if t.denominator != 1 or t <= 0]
    _fail(report, "multiplicities are positive integers", not bad, bad[0] if bad else None)
    mults = [int(t) for t in traces]
    _fail(report, "multiplicities sum to v", sum(mults) == v, sum(mults))
    _fail(report, "idempotent count = class count + 1", len(labels) == len(s.labels), len(labels))
    log.info("verified %d idempotents for m=%d", len(labels), s.spec.m)
    return SpectralData(labels, E, mults, list(s.labels), report)


def class_sums(s: Scheme, E: ScaledMatrix) -> list[Fraction]:
    """Sum of the entries of E over each class support, i.e. trace(E A_k) for symmetric E."""
    n = len(s.labels)
    idx = s.index.ravel().astype(np.int64)
    sums = np.zeros(n, dtype=object)
    num = E.num.ravel()
    # exact: per-class partial sums in int64
    order = np.argsort(idx, kind="stable")
    bounds = np.searchsorted(idx[order], np.arange(n + 1))
    sorted_num = num[order]
    for k in range(n):
        sums[k] = Fraction(int(sorted_num[bounds[k] : bounds[k + 1]].sum()), E.den)
    return list(sums)


def theorem_P(q: int, class_labels, labels) -> np.ndarray:
    """First eigenmatrix from the closed forms, rows = idempotents, cols = classes."""
    P = np.zeros((len(labels), len(class_labels)), dtype=np.int64)
    for r, (e, t) in enumerate(labels):
        for c, (a, i) in enumerate(class_labels):
            if e is None:
                P[r, c] = [1, q, q, q * q if t == 0 else -2 * q][i]
            elif t in (1, 2):
                sign = -1 if (t == 2 and i == 2) else 1
                P[r, c] = [1, q * character(e, a), sign * q * character(e, a), 0][i]
            else:
                sign = 1 if t == 3 else -1
                P[r, c] = [character(e, a), 0, 0, sign * q * character(e, a)][i]
    return P


def theorem_Q(q: int, class_labels, labels) -> np.ndarray:
    """Second eigenmatrix from the closed forms, rows = classes, cols = idempotents."""
    Q = np.zeros((len(class_labels), len(labels)), dtype=np.int64)
    h = q // 2 + 1
    for r, (a, i) in enumerate(class_labels):
        for c, (e, t) in enumerate(labels):
            if e is None:
                Q[r, c] = 1 if t == 0 else (-1 if i == 3 else q // 2)
            elif t == 1:
                Q[r, c] = [h, h * character(e, a), h * character(e, a), 0][i]
            elif t == 2:
                Q[r, c] = [h, h * character(e, a), -h * character(e, a), 0][i]
            else:
                sign = 1 if t == 3 else -1
                Q[r, c] = [h * q * character(e, a), 0, 0, sign * h * character(e, a)][i]
    return Q


def eigenmatrices(s: Scheme, sd: SpectralData) -> tuple[np.ndarray, np.ndarray]:
    """P from trace(E_i A_j) / m_i and Q from the class-constant entries of v E_j."""
    report = sd.report
    n, v, q = len(s.labels), s.v, s.spec.q
    P = np.zeros((n, n), dtype=np.int64)
    Q = np.zeros((n, n), dtype=np.int64)
    nonint, nonconst = [], []
    for r, lab in enumerate(sd.labels):
        E = sd.E(lab)
        sums = class_sums(s, E)
        sd.class_sums[lab] = sums
        coeffs = np.array([E.num[pos] for pos in s.representatives], dtype=np.int64)
        witness = first_mismatch(E.num, coeffs[s.index])
        if witness is not None:
            nonconst.append({"idempotent": idem_str(lab), **witness})
        for c in range(n):
            p = sums[c] / sd.multiplicities[r]
            val = Fraction(v * int(coeffs[c]), E.den)
            if p.denominator != 1 or val.denominator != 1:
                nonint.append([idem_str(lab), label_str(s.labels[c]), str(p), str(val)])
            P[r, c] = int(p)
            Q[c, r] = int(val)
    _fail(report, "idempotents constant on every class", not nonconst, nonconst[0] if nonconst else None)
    _fail(report, "P and Q entries integral", not nonint, nonint[0] if nonint else None)

    k = np.array(s.valencies, dtype=np.int64)
    m = np.array(sd.multiplicities, dtype=np.int64)
    _fail(report, "P row E_0 equals valencies", np.array_equal(P[0], k), P[0].tolist())
    _fail(report, "Q row A_00 equals multiplicities", np.array_equal(Q[0], m), Q[0].tolist())
    dual_l = np.diag(m) @ P
    dual_r = Q.T @ np.diag(k)
    _fail(report, "Delta_m P = Q^T Delta_k", np.array_equal(dual_l, dual_r), first_mismatch(dual_l, dual_r))
    PQ = P @ Q
    _fail(report, "P Q = v I", np.array_equal(PQ, v * np.eye(n, dtype=np.int64)), first_mismatch(PQ, v * np.eye(n, dtype=np.int64)))
    tP = theorem_P(q, s.labels, sd.labels)
    tQ = theorem_Q(q, s.labels, sd.labels)
    _fail(report, "P matches closed form", np.array_equal(P, tP), first_mismatch(P, tP))
    _fail(report, "Q matches closed form", np.array_equal(Q, tQ), first_mismatch(Q, tQ))
    sd.P, sd.Q = P, Q
    return P, Q


def krein(s: Scheme, sd: SpectralData) -> np.ndarray:
    """q_{ij}^k = (v / m_k) trace((E_i o E_j) E_k), with the expansion re-verified.

    Each entrywise product is read back as a class combination (and checked to
    be one), so the trace against E_k reduces to the class sums of E_k.
    """
    if sd.Q is None:
        eigenmatrices(s, sd)
    report = sd.report
    n, v = len(sd.labels), s.v
    qt = np.empty((n, n, n), dtype=object)
    sums = [sd.class_sums[lab] for lab in sd.labels]
    Qf = [[Fraction(int(x)) for x in row] for row in sd.Q]
    for i, li in enumerate(sd.labels):
        for j in range(i, n):
            H = sd.E(li).hadamard(sd.E(sd.labels[j]))
            coeffs = np.array([H.num[pos] for pos in s.representatives], dtype=np.int64)
            witness = first_mismatch(H.num, coeffs[s.index])
            if witness is not None:
                _fail(report, f"{idem_str(li)} o {idem_str(sd.labels[j])} in the Bose-Mesner algebra", False, witness)
            h = [Fraction(int(c), H.den) for c in coeffs]
            for kk in range(n):
                tr = sum((h[l] * sums[kk][l] for l in range(n)), Fraction(0))
                qt[i, j, kk] = qt[j, i, kk] = v * tr / sd.multiplicities[kk]
            # E_k = (1/v) sum_l Q_lk A_l, so the expansion holds iff class coordinates agree
            for l in range(n):
                rhs = sum((qt[i, j, kk] * Qf[l][kk] for kk in range(n)), Fraction(0)) / (v * v)
                if rhs != h[l]:
                    _fail(report, f"Krein expansion of {idem_str(li)} o {idem_str(sd.labels[j])}", False,
                          {"class": label_str(s.labels[l]), "got": str(h[l]), "expected": str(rhs)})
    report.add("entrywise products lie in the Bose-Mesner algebra", True)
    report.add("Krein expansions hold", True)
    neg = [(i, j, k) for (i, j, k), x in np.ndenumerate(qt) if x < 0]
    _fail(report, "Krein numbers nonnegative", not neg, [idem_str(sd.labels[t]) for t in neg[0]] if neg else None)
    bad0 = [(i, j) for i in range(n) for j in range(n)
            if qt[i, j, 0] != (sd.multiplicities[i] if i == j else 0)]
    _fail(report, "q_ij^0 = delta_ij m_i", not bad0, bad0[0] if bad0 else None)
    sd.krein = qt
    return qt


def appendix_krein(q: int, labels, printed: bool = False) -> np.ndarray:
    """Krein tensor from the closed-form entrywise products, aliases expanded.

    ``printed=True`` uses the variant of E_1 o E_{b,3} and E_1 o E_{b,4} with
    the (q+2)/4 and (q-2)/4 coefficients exchanged.
    """
    n = len(labels)
    pos = {lab: k for k, lab in enumerate(labels)}
    out = np.empty((n, n, n), dtype=object)
    out.fill(Fraction(0))
    F = Fraction
    h = F(q, 2) + 1

    def put(i, j, combo: dict):
        for lab, c in combo.items():
            for part, w in alias_expansion(q, lab).items():
                out[pos[i], pos[j], pos[part]] += c * w
                if i != j:
                    out[pos[j], pos[i], pos[part]] += c * w

    nz = range(1, q)
    for lab in labels:
        put(E0, lab, {lab: F(1)})
    put(E1, E1, {E0: F(q, 2), E1: F(q - 2, 2)})
    for b in nz:
        put(E1, (b, 1), {(b, 1): F(q, 2)})
        near, far = (F(q + 2, 4), F(q - 2, 4)) if printed else (F(q - 2, 4), F(q + 2, 4))
        put(E1, (b, 3), {(b, 3): near, (b, 4): far})
        put(E1, (b, 4), {(b, 3): far, (b, 4): near})
    for a in range(q):
        put(E1, (a, 2), {(a, 2): F(q, 2)})
    for b in nz:
        for b2 in nz:
            if b <= b2:
                put((b, 1), (b2, 1), {(b ^ b2, 1): F(q + 2, 2)})
                for t in (3, 4):
                    put((b, t), (b2, t), {(b ^ b2, 3): h * F(q + 1, 2), (b ^ b2, 4): h * F(q - 1, 2)})
            put((b, 3), (b2, 4), {(b ^ b2, 3): h * F(q - 1, 2), (b ^ b2, 4): h * F(q + 1, 2)})
            for t in (3, 4):
                put((b, 1), (b2, t), {(b2, 3): F(q + 2, 4), (b2, 4): F(q + 2, 4)})
        for a in range(q):
            put((b, 1), (a, 2), {(a ^ b, 2): F(q + 2, 2)})
            for t in (3, 4):
                put((a, 2), (b, t), {(b, 3): F(q + 2, 4), (b, 4): F(q + 2, 4)})
    for a in range(q):
        for a2 in range(a, q):
            put((a, 2), (a2, 2), {(a ^ a2, 1): F(q + 2, 2)})
    return out


def check_appendix(sd: SpectralData, q: int, printed: bool = False) -> VerificationReport:
    report = VerificationReport()
    expected = appendix_krein(q, sd.labels, printed)
    mism = None
    for idx, x in np.ndenumerate(sd.krein):
        if x != expected[idx]:
            mism = {"entry": [idem_str(sd.labels[t]) for t in idx], "got": str(x), "expected": str(expected[idx])}
            break
    report.add("Krein tensor matches closed forms", mism is None, mism)
    return report


def spectral_data(s: Scheme, *, threads: int = 1) -> SpectralData:
    """Idempotents, P, Q and the Krein tensor with every check recorded in ``sd.report``."""
    sd = idempotents(s, threads=threads)
    eigenmatrices(s, sd)
    krein(s, sd)
    sd.report.extend(check_appendix(sd, s.spec.q))
    return sd
