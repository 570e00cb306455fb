"""Strongly regular fusions of the scheme indexed by a permutation sigma of F_q."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact
from .construct import InvariantViolation, Scheme
from .exact import ScaledMatrix
from .field import FieldSpec, character, paut_partner
from .spectra import E0, E1, SpectralData, idem_str
from .verify import SCHEMA_VERSION, VerificationReport, verify_commutative_decomposition, verify_srg


@dataclass
class EigenRow:
    theta: tuple
    constituents: list
    multiplicity: int

    def to_json(self) -> dict:
        return {
            "theta": list(self.theta),
            "idempotents": [idem_str(c) for c in self.constituents],
            "multiplicity": self.multiplicity,
        }


@dataclass(eq=False)
class FusedDecomposition:
    sigma: tuple
    names: list
    blocks: list
    report: VerificationReport = field(default_factory=VerificationReport)
    eigenrows: list = field(default_factory=list)


def block_coefficients(q: int, sigma) -> list[tuple[str, dict]]:
    """Each fused block as ``(name, {class label: 1})``."""
    blocks = [("B_id", {(0, 0): 1})]
    cliq = {}
    for a in range(1, q):
        cliq[(a, 0)] = 1
        cliq[(a, 1)] = 1
    blocks.append(("B_cliq", cliq))
    for a in range(q):
        blocks.append((f"B_{a}", {(a, 2): 1, (sigma[a], 3): 1}))
    return blocks


def fuse(s: Scheme, sigma, *, threads: int = 1) -> FusedDecomposition:
    """Merge classes into B_id, the clique graph, and A_{a,2} + A_{sigma(a),3} for each a."""
    q, v = s.spec.q, s.v
    sigma = tuple(int(x) for x in sigma)
    if sorted(sigma) != list(range(q)):
        raise ValueError(f"sigma {sigma} is not a permutation of range({q})")
    spec = block_coefficients(q, sigma)
    names = [name for name, _ in spec]
    blocks = [s.combine(coeffs) for _, coeffs in spec]
    report = verify_commutative_decomposition(blocks, names, threads=threads)
    for name, b in zip(names, blocks):
        report.add(f"{name} is 0/1", bool(np.isin(b, (0, 1)).all()))
    report.add("B_cliq is SRG((q+2)q^2, q^2-1, q^2-2, 0)",
               verify_srg(blocks[1], v, q * q - 1, q * q - 2, 0, threads=threads))
    for name, b in zip(names[2:], blocks[2:]):
        report.add(f"{name} is SRG((q+2)q^2, q^2+q, q, q)", verify_srg(b, v, q * q + q, q, q, threads=threads))
    if not report.ok:
        raise InvariantViolation(f"fusion for sigma={sigma} failed: {report.failures()[0].to_json()}")
    return FusedDecomposition(sigma, names, blocks, report)


def fused_eigenmatrix(fd: FusedDecomposition, sd: SpectralData, *, threads: int = 1) -> list[EigenRow]:
    """Group fine idempotents by their eigenvalue vector on the blocks.

    theta_i[l] = trace(E_i B_l) / m_i. Every group sum is checked to be an
    idempotent and every block to equal sum_g theta_g[l] * (group sum g).
    """
    groups: dict = {}
    for lab, mult in zip(sd.labels, sd.multiplicities):
        E = sd.E(lab)
        theta = []
        for b in fd.blocks:
            val = Fraction(int((E.num * b).sum()), E.den) / mult
            if val.denominator != 1:
                raise InvariantViolation(f"non-integral eigenvalue {val} for {idem_str(lab)}")
            theta.append(int(val))
        groups.setdefault(tuple(theta), []).append(lab)

    v = fd.blocks[0].shape[0]
    # one shared denominator keeps the group sums and reconstructions in integers
    den = math.lcm(*(sd.E(lab).den for lab in sd.labels))
    rows = []
    sums = {}
    for theta, labs in groups.items():
        num = exact.zeros(v)
        for lab in labs:
            E = sd.E(lab)
            num = exact.checked_add(num, exact.checked_scale(E.num, den // E.den))
        if not ScaledMatrix(num, den).is_idempotent(threads=threads):
            raise InvariantViolation(f"group {[idem_str(l) for l in labs]} is not an idempotent")
        sums[theta] = num
        rows.append(EigenRow(theta, labs, sum(sd.multiplicities[sd.labels.index(l)] for l in labs)))
    for l, (name, b) in enumerate(zip(fd.names, fd.blocks)):
        recon = exact.zeros(v)
        for theta, num in sums.items():
            if theta[l]:
                recon += theta[l] * num
        if not np.array_equal(recon, den * b):
            raise InvariantViolation(f"{name} is not spanned by the grouped idempotents")
    fd.report.add("grouped idempotents reconstruct every block", True)
    fd.report.add("eigenrow multiplicities sum to v", sum(r.multiplicity for r in rows) == v)
    fd.report.add("rows >= blocks", len(rows) >= len(fd.blocks), {"rows": len(rows), "blocks": len(fd.blocks)})
    fd.eigenrows = rows
    return rows


def classify_sigma(spec: FieldSpec, sigma) -> tuple[str, tuple | None]:
    tau = paut_partner(spec, sigma)
    return ("paut", tau) if tau is not None else ("non-paut", None)


def corollary_groups(spec: FieldSpec, sigma, tau=None) -> dict:
    """Tabulated eigenrows as ``{theta: constituent labels}`` for the case selected by tau.

    Rows that coincide (possible for small q) are merged and their
    constituents pooled, which is how the grouping by theta reports them.
    """
    q = spec.q
    out: dict = {}

    def put(theta, *labels):
        out.setdefault(tuple(theta), set()).update(labels)

    put((1, q * q - 1, *([q * q + q] * q)), E0)
    put((1, q * q - 1, *([-q] * q)), E1, (0, 2))
    for b in range(1, q):
        chi = [q * character(b, a) for a in range(q)]
        neg = [-c for c in chi]
        if tau is not None:
            put((1, -1, *chi), (b, 1), (tau[b], 3))
            put((1, -1, *neg), (b, 2), (tau[b], 4))
        else:
            chi_s = [q * character(b, sigma[a]) for a in range(q)]
            put((1, -1, *chi), (b, 1))
            put((1, -1, *neg), (b, 2))
            put((1, -1, *chi_s), (b, 3))
            put((1, -1, *[-c for c in chi_s]), (b, 4))
    return out


def corollary_rows(spec: FieldSpec, sigma, tau=None) -> set:
    """Distinct rows of the tabulated eigenmatrix."""
    return set(corollary_groups(spec, sigma, tau))


def fusion_run(s: Scheme, sd: SpectralData, sigma, *, threads: int = 1) -> dict:
    """Fuse, group, classify and compare with the tabulated rows; JSON-ready result."""
    q = s.spec.q
    fd = fuse(s, sigma, threads=threads)
    rows = fused_eigenmatrix(fd, sd, threads=threads)
    case, tau = classify_sigma(s.spec, sigma)
    got = {r.theta: set(r.constituents) for r in rows}
    want = corollary_groups(s.spec, fd.sigma, tau)
    fd.report.add("eigenrows match the tabulated case", set(got) == set(want),
                  {"missing": sorted(set(want) - set(got)), "extra": sorted(set(got) - set(want))})
    wrong = [idem_str(min(want[t], key=str)) for t in want if t in got and got[t] != want[t]]
    fd.report.add("constituent idempotents match the tabulated rows", not wrong, {"rows_led_by": wrong})
    limit = 2 * q if case == "paut" else 2 + 4 * (q - 1)
    fd.report.add("distinct row count within case bound", len(rows) <= limit, {"rows": len(rows), "bound": limit})
    return {
        "schema_version": SCHEMA_VERSION,
        "field": s.spec.describe(),
        "sigma": list(fd.sigma),
        "case": case,
        "tau": list(tau) if tau is not None else None,
        "block_labels": fd.names,
        "eigenrows": [r.to_json() for r in rows],
        "status": "pass" if fd.report.ok else "fail",
        "checks": fd.report.to_json(),
    }


def all_permutations(q: int):
    return itertools.permutations(range(q))


def sample_permutations(q: int, count: int, seed: int = 0) -> list[tuple]:
    """Identity first, then ``count - 1`` seeded random permutations."""
    rng = np.random.default_rng(seed)
    out = [tuple(range(q))]
    while len(out) < count:
        out.append(tuple(int(x) for x in rng.permutation(q)))
    return out
