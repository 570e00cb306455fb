"""Command line: ``srscheme build | certify | fuse``.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage error,
3 construction invariant violated.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import exact
from .construct import InvariantViolation, build_scheme, clique_matrix, label_str
from .field import FieldSpec, parse_permutation
from .fusion import all_permutations, fusion_run, sample_permutations
from .spectra import spectral_data
from .verify import (
    SCHEMA_VERSION,
    VerificationReport,
    check_proposition,
    intersection_numbers,
    sample_pairs,
    tensor_invariants,
    verify_commutative_decomposition,
    verify_srg,
)

log = logging.getLogger("srscheme")

SPOT_PRODUCTS = 32
SPOT_DESIGNS = 4


class UsageError(Exception):
    pass


def _irr(text: str | None) -> int:
    if text is None:
        return 0
    try:
        return int(text, 16) if text.lower().startswith("0x") else int(text, 2)
    except ValueError as exc:
        raise UsageError(f"--irr must be a binary string (MSB first) or 0x-hex, got {text!r}") from exc


def field_spec(args) -> FieldSpec:
    if args.m < 1:
        raise UsageError(f"--m must be >= 1, got {args.m}")
    try:
        return FieldSpec(args.m, _irr(args.irr))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def relabel(args, q: int):
    if not args.latin_relabel:
        return None
    try:
        return parse_permutation(args.latin_relabel, q + 1)
    except ValueError as exc:
        raise UsageError(f"--latin-relabel: {exc}") from exc


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _emit(args, summary: dict) -> None:
    if args.format == "json":
        print(json.dumps(summary, sort_keys=True))
    else:
        for key in sorted(summary):
            print(f"{key}: {summary[key]}")


def cmd_build(args) -> int:
    spec = field_spec(args)
    s = build_scheme(spec, relabel(args, spec.q))
    out = _out(args)
    (out / "latin.txt").write_text(s.latin.to_text())
    classes = out / "classes"
    classes.mkdir(exist_ok=True)
    for k, lab in enumerate(s.labels):
        exact.write_coo(classes / f"{label_str(lab)}.coo", s.matrix(k))
    summary = {
        "schema_version": SCHEMA_VERSION,
        "field": spec.describe(),
        "v": s.v,
        "classes": s.class_count,
        "labels": [label_str(l) for l in s.labels],
        "valencies": s.valencies,
    }
    _write_json(out / "summary.json", summary)
    _emit(args, {"v": s.v, "classes": s.class_count, "valencies": sorted(set(s.valencies))})
    return 0


def _design_checks(s, report: VerificationReport, alphas, threads: int, full: bool) -> None:
    spec, v, q = s.spec, s.v, s.spec.q
    eye = exact.identity(v)
    designs = {}
    for a in alphas:
        n = s.n_matrix(a)
        sq = exact.mat_mul(n, n, threads=threads)
        report.add(f"N_{a}^2 = q^2 I + q J", np.array_equal(sq, q * q * eye + q * exact.ones(v)))
        if full:
            designs[a] = n
    if not full:
        return
    clique = clique_matrix(spec)
    for a, n in designs.items():
        report.add(f"N_{a} is SRG((q+2)q^2, q^2+q, q, q)", verify_srg(n, v, q * q + q, q, q, threads=threads))
    report.add("clique graph is SRG((q+2)q^2, q^2-1, q^2-2, 0)",
               verify_srg(clique, v, q * q - 1, q * q - 2, 0, threads=threads))
    mats = [eye, *designs.values(), clique]
    names = ["I", *[f"N_{a}" for a in designs], "clique"]
    report.extend(verify_commutative_decomposition(mats, names, threads=threads))


def cmd_certify(args) -> int:
    spec = field_spec(args)
    tier = args.tier or ("full" if spec.m <= 3 else "spot")
    if tier == "full" and spec.m >= 4 and not args.force_full:
        raise UsageError("--tier full is refused for m >= 4 (v >= 4608); pass --force-full to run it anyway")
    out = _out(args)
    started = time.perf_counter()
    s = build_scheme(spec, relabel(args, spec.q))
    report = VerificationReport()
    report.add("classes are 0/1, symmetric, regular and partition J_v", True)
    threads = args.threads

    if tier == "full":
        _design_checks(s, report, range(spec.q), threads, full=True)
        report.extend(verify_commutative_decomposition(s.matrices(), [label_str(l) for l in s.labels],
                                                       threads=threads))
        t = intersection_numbers(s, threads=threads)
    else:
        rng = np.random.default_rng(0)
        alphas = sorted(int(a) for a in rng.choice(spec.q, size=min(SPOT_DESIGNS, spec.q), replace=False))
        _design_checks(s, report, alphas, threads, full=False)
        t = intersection_numbers(s, sample_pairs(len(s.labels), SPOT_PRODUCTS), threads=threads)
    report.extend(tensor_invariants(t))
    report.extend(check_proposition(s, t))
    t.dump(out / "intersection.json")

    if tier == "full":
        sd = spectral_data(s, threads=threads)
        report.extend(sd.report)
        sd.dump(out)

    payload = {
        "schema_version": SCHEMA_VERSION,
        "field": spec.describe(),
        "tier": tier,
        "v": s.v,
        "checks": report.to_json(),
    }
    _write_json(out / "report.json", payload)
    failed = report.failures()
    log.info("certify m=%d tier=%s finished in %.1fs", spec.m, tier, time.perf_counter() - started)
    _emit(args, {"v": s.v, "tier": tier, "checks": len(report.checks), "failed": len(failed)})
    for c in failed:
        log.error("FAILED %s: %s", c.name, c.witness)
    return 0 if not failed else 1


def sigma_list(text: str, spec: FieldSpec):
    if text == "all":
        if spec.m > 2:
            raise UsageError("--sigma all is limited to m <= 2; use sample:N")
        return list(all_permutations(spec.q))
    if text.startswith("sample:"):
        try:
            count = int(text.split(":", 1)[1])
        except ValueError as exc:
            raise UsageError(f"bad sample count in {text!r}") from exc
        if count < 1:
            raise UsageError("sample count must be positive")
        return sample_permutations(spec.q, count)
    try:
        return [parse_permutation(text, spec.q)]
    except ValueError as exc:
        raise UsageError(f"--sigma: {exc}") from exc


def cmd_fuse(args) -> int:
    spec = field_spec(args)
    sigmas = sigma_list(args.sigma, spec)
    s = build_scheme(spec, relabel(args, spec.q))
    sd = spectral_data(s, threads=args.threads)
    out = _out(args) / "fusion"
    out.mkdir(exist_ok=True)
    counts = {"paut": 0, "non-paut": 0}
    failed = 0
    rows = set()
    for sigma in sigmas:
        result = fusion_run(s, sd, sigma, threads=args.threads)
        counts[result["case"]] += 1
        failed += result["status"] != "pass"
        rows.add(len(result["eigenrows"]))
        _write_json(out / f"sigma_{'-'.join(map(str, sigma))}.json", result)
    _emit(args, {"reports": len(sigmas), "paut": counts["paut"], "non_paut": counts["non-paut"],
                 "failed": failed, "eigenrow_counts": sorted(rows)})
    return 0 if not failed else 1


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, required=True, help="field exponent, q = 2^m")
    common.add_argument("--irr", help="irreducible polynomial, binary MSB first (e.g. 10011) or 0x-hex")
    common.add_argument("--latin-relabel", help="permutation of the q+1 round labels, label q meaning y")
    common.add_argument("--out", default="out", help="output directory")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="srscheme", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="construct and export the scheme")
    cert = sub.add_parser("certify", parents=[common], help="verify every identity and export tables")
    cert.add_argument("--tier", choices=("full", "spot"))
    cert.add_argument("--force-full", action="store_true", help="allow --tier full for m >= 4")
    fuse = sub.add_parser("fuse", parents=[common], help="fusions indexed by sigma")
    fuse.add_argument("--sigma", required=True, help='image list "0,2,1,3", "all" or "sample:N"')
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    handler = {"build": cmd_build, "certify": cmd_certify, "fuse": cmd_fuse}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"srscheme: error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"srscheme: invariant violated: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
