import json
import subprocess
import sys

import numpy as np
import pytest

from srscheme import exact
from srscheme.cli import main


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path), "--format", "json"])


def test_build_m1(tmp_path, capsys):
    assert run(tmp_path, "build", "--m", "1") == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary == {"v": 16, "classes": 6, "valencies": [1, 2, 4]}
    on_disk = json.loads((tmp_path / "summary.json").read_text())
    assert on_disk["schema_version"] == 1 and len(on_disk["labels"]) == 7
    coo = sorted((tmp_path / "classes").glob("*.coo"))
    assert len(coo) == 7
    total = sum(exact.read_coo(p) for p in coo)
    assert np.array_equal(total, exact.ones(16))
    assert (tmp_path / "latin.txt").read_text().split("\n")[0].split()[0] == "x"


def test_build_m2(tmp_path, capsys):
    assert run(tmp_path, "build", "--m", "2") == 0
    assert json.loads(capsys.readouterr().out)["v"] == 96


@pytest.mark.parametrize(
    "args",
    [
        ["build", "--m", "0"],
        ["build", "--m", "2", "--irr", "101"],
        ["build", "--m", "2", "--irr", "zz"],
        ["build", "--m", "1", "--latin-relabel", "0,0,1"],
        ["fuse", "--m", "2", "--sigma", "0,1,2"],
        ["fuse", "--m", "3", "--sigma", "all"],
        ["fuse", "--m", "2", "--sigma", "sample:0"],
        ["certify", "--m", "4", "--tier", "full"],
        ["build", "--m", "1", "--threads", "0"],
    ],
)
def test_usage_errors_exit_2(tmp_path, args, capsys):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(run(tmp_path, *args))
    assert exc.value.code == 2
    captured = capsys.readouterr()
    assert captured.out == "" and "error" in captured.err


def test_certify_m1(tmp_path, capsys):
    assert run(tmp_path, "certify", "--m", "1") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["failed"] == 0 and out["tier"] == "full"
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["schema_version"] == 1
    assert all(c["status"] == "pass" for c in report["checks"])
    for name in ("P.json", "Q.json", "krein.json", "intersection.json"):
        assert json.loads((tmp_path / name).read_text())["schema_version"] == 1


def test_certify_spot_tier_small(tmp_path, capsys):
    assert run(tmp_path, "certify", "--m", "2", "--tier", "spot") == 0
    assert json.loads(capsys.readouterr().out)["tier"] == "spot"
    assert not (tmp_path / "P.json").exists()


def test_certify_failure_exit_1(tmp_path, monkeypatch, capsys):
    import srscheme.cli as cli
    from srscheme.verify import VerificationReport

    def failing(*a, **k):
        r = VerificationReport()
        r.add("forced failure", False, {"why": "test"})
        return r

    monkeypatch.setattr(cli, "check_proposition", failing)
    assert run(tmp_path, "certify", "--m", "1") == 1
    report = json.loads((tmp_path / "report.json").read_text())
    assert {"check": "forced failure", "status": "fail", "witness": {"why": "test"}} in report["checks"]


def test_invariant_violation_exit_3(tmp_path, monkeypatch, capsys):
    import srscheme.cli as cli
    from srscheme.construct import InvariantViolation

    def broken(*a, **k):
        raise InvariantViolation("A_1_2 is not symmetric")

    monkeypatch.setattr(cli, "build_scheme", broken)
    assert run(tmp_path, "build", "--m", "1") == 3
    assert "A_1_2 is not symmetric" in capsys.readouterr().err


def test_fuse_m1_identity(tmp_path, capsys):
    assert run(tmp_path, "fuse", "--m", "1", "--sigma", "0,1") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["eigenrow_counts"] == [4] and out["paut"] == 1
    report = json.loads((tmp_path / "fusion" / "sigma_0-1.json").read_text())
    assert report["case"] == "paut" and report["tau"] == [0, 1] and len(report["eigenrows"]) == 4


def test_fuse_m2_all(tmp_path, capsys):
    assert run(tmp_path, "fuse", "--m", "2", "--sigma", "all") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["reports"] == 24 and out["paut"] == 6 and out["failed"] == 0
    assert len(list((tmp_path / "fusion").glob("*.json"))) == 24


def test_outputs_identical_across_thread_counts(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["certify", "--m", "2", "--out", str(a), "--threads", "1"]) == 0
    assert main(["certify", "--m", "2", "--out", str(b), "--threads", "3"]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_irr_and_relabel_flags(tmp_path, capsys):
    assert run(tmp_path, "certify", "--m", "3", "--irr", "1101", "--tier", "spot") == 0
    assert json.loads((tmp_path / "report.json").read_text())["field"]["irr"] == "1101"
    assert run(tmp_path, "certify", "--m", "1", "--latin-relabel", "2,0,1") == 0


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "srscheme.cli", "build", "--m", "1", "--out", str(tmp_path)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "v: 16" in proc.stdout and proc.stderr == ""
