from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from transsasakian.cli import main

from test_manifest import MINIMAL


def run_json(capsys, *argv) -> tuple[int, dict]:
    code = main(["check", *argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("name, code", [("example.tsm", 2), ("s3.tsm", 0), ("flat.tsm", 0)])
def test_fixture_exit_codes(capsys, name, code):
    got, report = run_json(capsys, name)
    assert got == code == report["exit_code"]


def test_json_is_deterministic(capsys):
    main(["check", "example.tsm", "--format", "json", "--suite", "curvature"])
    first = capsys.readouterr().out
    main(["check", "example.tsm", "--format", "json", "--suite", "curvature"])
    assert capsys.readouterr().out == first


def test_json_shape(capsys):
    _, report = run_json(capsys, "flat.tsm", "--suite", "soliton")
    assert report["schema_version"] == 1 and report["manifest"] == "flat.tsm"
    (suite,) = report["suites"]
    assert suite["suite"] == "soliton"
    item = suite["items"][0]
    assert set(item) == {"identity_id", "paper_ref", "status", "residual_components",
                         "notes", "conflicts_with_paper", "values"}


def test_suite_selection_pulls_nothing_extra(capsys):
    _, report = run_json(capsys, "s3.tsm", "--suite", "connection", "--suite", "curvature")
    assert [s["suite"] for s in report["suites"]] == ["connection", "curvature"]


def test_manifest_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "bad.tsm"
    bad.write_text(MINIMAL + "V = x, (y, z\n")
    assert main(["check", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "line 10" in err and "unbalanced" in err


def test_missing_file_and_bad_usage_exit_1(tmp_path, capsys):
    assert main(["check", str(tmp_path / "nothing.tsm")]) == 1
    assert main(["check", "flat.tsm", "--suite", "bogus"]) == 1
    assert main([]) == 1


def test_geometry_errors_exit_1(tmp_path, capsys):
    bad = tmp_path / "singular.tsm"
    bad.write_text(MINIMAL.replace("frame.3 = 0, 0, 1", "frame.3 = 0, 0, x"))
    assert main(["check", str(bad)]) == 1
    assert "not provably nonzero" in capsys.readouterr().err


def test_text_output_has_summary(capsys):
    assert main(["check", "s3.tsm", "--suite", "trans-sasakian"]) == 0
    out = capsys.readouterr().out
    assert "alpha-Sasakian" in out and out.rstrip().splitlines()[-1].startswith("summary:")


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "transsasakian", "check", "flat.tsm",
                           "--suite", "connection"], capture_output=True, text=True, cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    assert "connection.torsion-free" in proc.stdout


def test_local_file_wins_over_bundled_fixture(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    Path("flat.tsm").write_text(MINIMAL + "V = 0, 0, x\n")
    _, report = run_json(capsys, "flat.tsm", "--suite", "soliton")
    assert report["exit_code"] == 2


@pytest.mark.parametrize("name, suite", [("s3.tsm", "identities"), ("flat.tsm", "soliton")])
def test_documented_passing_runs(capsys, name, suite):
    code, report = run_json(capsys, name, "--suite", suite)
    assert code == 0 and report["summary"]["fail"] == 0
