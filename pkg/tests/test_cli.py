import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from lindiv.cli import main

SPECS = Path(__file__).parent.parent / "specs"
FIXTURES = Path(__file__).parent / "fixtures"


def run(*args, env=None):
    return CliRunner().invoke(main, [str(a) for a in args], env=env)


def test_eval():
    r = run("eval", SPECS / "fibonacci.json", "--to", 10)
    assert r.exit_code == 0 and r.output.split() == "0 1 1 2 3 5 8 13 21 34 55".split()
    r = run("eval", SPECS / "guy_williams.json", "--to", 3)
    assert r.output.split() == ["0", "1", "7", "21"]
    r = run("eval", SPECS / "bala.json", "--from", 1, "--to", 4, "--json")
    assert json.loads(r.output)["terms"] == ["2", "24", "136", "1008"]


def test_check():
    r = run("check", SPECS / "fibonacci.json", "--strong")
    assert r.exit_code == 0 and r.output.startswith("pass")
    r = run("check", SPECS / "n_plus_one.json")
    assert r.exit_code == 1 and "u_1 = 2 does not divide u_2 = 3" in r.output
    r = run("check", SPECS / "n_plus_one.json", "--json")
    out = json.loads(r.output)
    assert out["pass"] is False and out["witness"]["m"] == 1


def test_bound_env():
    r = run("check", SPECS / "mersenne.json", "--json", env={"LINDIV_BOUND": "25"})
    assert json.loads(r.output)["bound"] == 25


def test_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 1, "sequence": {"type": "lucas", "P": 1}}')
    r = run("eval", bad)
    assert r.exit_code == 2
    r = run("eval", tmp_path / "missing.json")
    assert r.exit_code == 2
    r = run("gcd-growth", SPECS / "mersenne.json", SPECS / "fibonacci.json", "--eps", "0.1")
    assert r.exit_code == 2


def test_decompose_cmd():
    r = run("decompose", SPECS / "guy_williams.json", "--json")
    assert r.exit_code == 0
    out = json.loads(r.output)
    assert out["name"] == "guy-williams" and out["M"] == 1
    r = run("decompose", SPECS / "n_plus_one.json")
    assert r.exit_code == 1


def test_enumerate_and_table():
    r = run("enumerate", "--k", 3, "--periodic", "--json")
    rows = json.loads(r.output)["rows"]
    assert [r["values"] for r in rows] == [["0", "1", "1"], ["0", "1", "2", "1"], ["0", "1", "3", "4", "3", "1"]]
    r = run("enumerate", "--k", 3, "--periodic", "--all-signs", "--json")
    assert len(json.loads(r.output)["rows"]) == 6
    r = run("enumerate", "--k", 3)
    assert r.exit_code == 2
    r = run("table", "--k-max", 4, "--json")
    assert json.loads(r.output)["rows"] == json.loads((FIXTURES / "periodic_table.json").read_text())["computed"]


def test_gcd_growth_cmd():
    r = run("gcd-growth", SPECS / "mersenne.json", SPECS / "fibonacci.json", "--eps", "1/10", "--n-max", 40, "--json")
    out = json.loads(r.output)
    assert r.exit_code == 1 and out["pass"] is False
    assert all(p["m"] <= p["n"] for p in out["pairs"])


@pytest.mark.parametrize("args", [("decompose", SPECS / "bala.json", "--json"),
                                  ("check", SPECS / "fibonacci.json", "--strong", "--json")])
def test_deterministic(args):
    assert run(*args).output == run(*args).output
