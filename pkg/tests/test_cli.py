import json

import pytest
from click.testing import CliRunner

from heunpull.cli import main


@pytest.fixture
def run():
    runner = CliRunner()
    return lambda *args: runner.invoke(main, list(args))


def test_covering_cyclic(run):
    r = run("covering", "cyclic", "2", "1")
    assert r.exit_code == 0
    doc = json.loads(r.output)
    assert doc["phi"]["num"] == ["0", "0", "3", "-2"]
    assert doc["passport"] == {"0": [2, 1], "1": [2, 1], "inf": [3]}
    assert doc["belyi"] is True


def test_covering_dihedral(run):
    doc = json.loads(run("covering", "dihedral", "1", "2").output)
    assert doc["Theta1"] == ["1", "-3/4"] and doc["Theta2"] == ["1/4"] and doc["t"] == "4"


def test_covering_degenerate(run):
    r = run("covering", "dihedral", "3", "3")
    assert r.exit_code == 2
    assert "degenerate covering" in r.output


def test_covering_nonbelyi_rejects_decimal(run):
    assert run("covering", "nonbelyi", "0.5").exit_code == 2
    doc = json.loads(run("covering", "nonbelyi", "1/3").output)
    assert doc["belyi"] is False and doc["extra_branch"][0]["value"] == "3/4"


def test_verify(run):
    r = run("verify", "CYC1", "--profile", "quick", "--seed", "0")
    assert r.exit_code == 0
    doc = json.loads(r.output.splitlines()[0])
    assert doc["id"] == "CYC1" and doc["status"] == "pass"
    assert run("verify", "NOPE").exit_code == 2


def test_verify_byte_identical(run):
    a = run("--seed", "3", "verify", "REM-POW1").output
    b = run("--seed", "3", "verify", "REM-POW1").output
    assert a == b


def test_eval(run):
    r = run("eval", "heun", "--t", "4", "--q", "3/2", "--a", "-3/2", "--b", "-1", "--c", "-1/2", "--d", "0",
            "--x", "0.1")
    assert r.exit_code == 0 and json.loads(r.output)["value"] == "0.925"
    r = run("eval", "2f1", "--A", "-1", "--B", "1", "--C", "2", "--x", "0.3")
    assert json.loads(r.output)["value"] == "0.85"
    r = run("eval", "heun", "--t", "1/4", "--q", "1", "--a", "1/3", "--b", "1/2", "--c", "1/3", "--d", "1/5",
            "--x", "0.95")
    assert r.exit_code == 3


def test_eval_closed(run):
    r = run("eval", "closed", "--a", "2", "--x", "1/2")
    assert json.loads(r.output)["value"] == "0.75"
    assert run("eval", "closed", "--a", "1/2", "--x", "2").exit_code == 3


def test_precision_floor(run):
    assert run("--precision", "10", "eval", "2f1", "--A", "1", "--B", "1", "--C", "1", "--x", "0.1").exit_code == 2


@pytest.mark.parametrize("scenario", ["P1", "TRIVPBF", "NONBELYI", "DIHEDRAL-DIFF"])
def test_pullback_scenarios(run, scenario):
    r = run("pullback", scenario)
    assert r.exit_code == 0, r.output
    doc = json.loads(r.output)
    assert doc["match"] is True and doc["witness"] is None


def test_pullback_rejects_decimal(run):
    assert run("pullback", "P1", "--A", "0.3").exit_code == 2
