"""
Test the command-line surface end to end through run()
"""
import json

import pytest
from typer.testing import CliRunner

from walker.cli import app, run


@pytest.fixture(autouse=True)
def isolated_cwd(tmp_path, monkeypatch):
    """Keep a stray .env out of the settings."""
    monkeypatch.chdir(tmp_path)


def test_moments_table_csv(capsys):
    assert run(["moments", "--steps", "4", "--dim", "4", "--upto", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# walker version=")
    assert "steps=4" in lines[0]
    assert lines[1] == "k,s,value"
    assert [line.split(",")[2] for line in lines[2:]] == ["1", "4", "22", "148", "1144"]


def test_moments_written_to_file(capsys, tmp_path):
    target = tmp_path / "w3.json"
    assert run(["moments", "--steps", "3", "--dim", "2", "--upto", "3", "--format", "json", "--out", str(target)]) == 0
    assert "[OK] Wrote 3 row(s)" in capsys.readouterr().out
    doc = json.loads(target.read_text(encoding="utf-8"))
    assert [row["value"] for row in doc["rows"]] == ["1", "3", "15"]
    assert doc["meta"]["dim"] == 2


def test_single_moment_reports_its_path(capsys):
    assert run(["moment", "--steps", "4", "--dim", "3", "--s", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["exact"] == "28/15"
    assert doc["method"] == "odd-dimension"
    assert doc["value"].startswith("1.866666")


def test_constant_basis_moment(capsys):
    assert run(["moment", "--steps", "3", "--dim", "2", "--s", "1", "--closed"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["method"] == "constant-basis"
    assert doc["combo"] == {"basis": "w3", "coeffs": {"A": "1", "1/(pi^2 A)": "6"}}
    assert abs(float(doc["value"]) - 1.5746) <= 5e-5


def test_density_grid(capsys):
    assert run(["density", "--steps", "3", "--dim", "3", "--grid", "0", "3", "7", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)["rows"]
    assert [r["x"] for r in rows] == ["0", "1/2", "1", "3/2", "2", "5/2", "3"]
    assert rows[1]["value"] == "1/8"
    assert rows[4]["value"] == "1/2"
    assert {r["method"] for r in rows} == {"piecewise-exact"}
    assert rows[0]["est_error"] == ""


def test_cdf_points(capsys):
    assert run(["cdf", "--steps", "3", "--dim", "3", "--x", "1", "--x", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "x,value,method,est_error"
    assert lines[2].startswith("1,1/6,piecewise-exact")
    assert lines[3].startswith("4,1,")


def test_generating_function_check(capsys):
    assert run(["gf", "--kind", "w2", "--dim", "4", "--x", "1/20"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["residual"] < 1e-10
    assert doc["nu"] == "1"


def test_constants(capsys):
    assert run(["constants", "--digits", "15"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["constants"]["pi"].startswith("3.14159265358979")
    assert doc["constants"]["zeta3"].startswith("1.2020569031595")


def test_residues_table(capsys):
    assert run(["residues", "--dim", "6", "--upto", "4"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "k,pole,V3,residue"
    assert [line.split(",")[2] for line in lines[2:]] == ["1", "-5", "6", "2"]


def test_library_error_exits_one(capsys):
    assert run(["moment", "--steps", "2", "--dim", "2", "--s", "-1"]) == 1
    captured = capsys.readouterr()
    assert json.loads(captured.out)["error"]["code"] == "pole"
    assert "[ERROR]" in captured.err


def test_usage_errors_exit_two(capsys):
    assert run(["moments", "--steps", "3", "--dim", "2", "--bogus"]) == 2
    assert "bogus" in capsys.readouterr().err
    assert run(["moment", "--steps", "3", "--dim", "2", "--s", "1", "--closed", "--quad"]) == 2
    assert run(["verify", "--suite", "nonsense"]) == 2


def test_verify_single_suite(capsys):
    assert run(["verify", "--suite", "improbable", "--checks"]) == 0
    out = capsys.readouterr().out
    assert "improbable" in out
    assert "PASS" in out
    assert "[OK] All checks passed" in out


def test_simulate_reports_seed(capsys):
    assert run(["simulate", "--steps", "2", "--dim", "3", "--samples", "4000", "--seed", "5", "--s", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["meta"]["seed"] == 5
    assert doc["meta"]["rng"] == "Philox"
    second = doc["moment_estimates"]["2"]
    assert abs(second["mean"] - 2) < 4 * second["stderr"]


def test_runner_invocation():
    result = CliRunner().invoke(app, ["residues", "--dim", "2", "--upto", "3", "--format", "json"])
    assert result.exit_code == 0
    rows = json.loads(result.output)["rows"]
    assert [r["V3"] for r in rows] == ["1", "3", "15"]
    assert [r["pole"] for r in rows] == ["-2", "-4", "-6"]
