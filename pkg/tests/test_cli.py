import json
import subprocess
import sys

import pytest

from psreduce.cli import default_corpus, main, read_corpus
from psreduce.frontend import parse_invariant, parse_poly, parse_rational, render

from conftest import EX1, EX2, EX3


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_reduce_example_one(capsys):
    code, rep = run_json(capsys, "reduce", EX1, "--trajectories", "2")
    assert code == 0 and rep["status"] == "ok"
    assert rep["checks"]["symbolic"] is True
    assert rep["checks"]["numeric_max_drift"] < 1e-6
    chosen = rep["pairs"][rep["chosen"]]
    assert (chosen["S"], chosen["R"]) == ("y/y'", "y'")
    assert rep["invariant"]["text"] == "y'^2 + y^2"
    assert rep["reduced"]["explicit"] == ["y' = sqrt(-y^2 + C1)", "y' = -sqrt(-y^2 + C1)"]
    assert set(rep["timing_ms"]) >= {"parse", "search", "invariant", "numeric"}


def test_json_round_trip(capsys):
    """Every rendered expression in a report re-parses to the same value."""
    code, rep = run_json(capsys, "reduce", EX2, "--trajectories", "0", "--all", "--max-degree", "2")
    assert code == 0
    assert render(parse_poly(rep["M"])) == rep["M"] and render(parse_poly(rep["N"])) == rep["N"]
    for p in rep["pairs"]:
        for key in ("S", "R"):
            assert render(parse_rational(p[key])) == p[key]
    inv = rep["invariant"]
    assert render(parse_rational(inv["z0"])) == inv["z0"]
    for term in inv["logs"]:
        assert render(parse_poly(term["z"])) == term["z"]
    assert render(parse_invariant(inv["text"])) == inv["text"]


def test_reduce_example_three_human(capsys):
    code, out, _ = run(capsys, "reduce", EX3, "--trajectories", "1")
    assert code == 0
    assert "invariant: (x^2*y'^2 + 2*x*y*y' + y^2 - 1)/(x^2*y^2)" in out
    assert "symbolic:  ok" in out


def test_reduce_constant_rhs(capsys):
    code, rep = run_json(capsys, "reduce", "y'' = 1", "--max-degree", "1", "--trajectories", "0")
    assert code == 0 and rep["checks"]["symbolic"]


def test_reduce_nothing_found_exit_code(capsys):
    code, rep = run_json(capsys, "reduce", "y'' = x*y", "--max-degree", "1")
    assert code == 2
    assert rep["status"] == "nothing-found" and "NothingFound" in rep["message"]


def test_timeout_reported_as_nothing_found(capsys):
    code, rep = run_json(capsys, "reduce", EX3, "--timeout", "0.01", "--trajectories", "0")
    assert code == 2 and "LimitExceeded" in rep["message"]


@pytest.mark.parametrize("argv", [
    ("reduce", "y'' = (y' + "),
    ("reduce", "y'' = sin(x)"),
    ("solve1", "y' = x +* y"),
    ("reduce", "y' = y/x"),
    ("verify", EX1, "y^2 + "),
])
def test_errors_exit_one(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert "position" in out + err or "expects" in out + err


def test_solve1(capsys):
    code, rep = run_json(capsys, "solve1", "y' = y/x", "--trajectories", "2")
    assert code == 0
    assert rep["integrating_factor"] == "x^-1*y^-1"
    assert rep["invariant"]["text"] == "log(y) - log(x)"
    code, rep = run_json(capsys, "solve1", "y' = -x/y", "--trajectories", "0")
    assert code == 0 and rep["invariant"]["text"] == "y^2 + x^2"


def test_solve1_nothing_found(capsys):
    code, rep = run_json(capsys, "solve1", "y' = y^2 - x^2 + 1", "--degree", "1")
    assert code == 2


def test_verify(capsys):
    code, rep = run_json(capsys, "verify", EX2, "y'/(x*y^3)", "--trajectories", "3")
    assert code == 0
    assert rep["checks"]["symbolic"] and rep["checks"]["numeric_max_drift"] < 1e-6
    code, rep = run_json(capsys, "verify", EX1, "y")
    assert code == 2 and rep["checks"]["symbolic"] is False
    code, rep = run_json(capsys, "verify", EX1, "y^2 + y'^2", "--trajectories", "0")
    assert code == 0 and rep["checks"]["numeric_max_drift"] is None


def test_darboux(capsys):
    code, rep = run_json(capsys, "darboux", "y' = y/x", "--degree", "1")
    assert code == 0
    assert {(d["f"], d["cofactor"]) for d in rep["darboux"]} >= {("x", "1"), ("y", "1")}


def test_shipped_corpus_file():
    entries = read_corpus(default_corpus())
    assert [e.ode for e in entries] == [EX1, EX2, EX3]
    assert all(e.expect for e in entries)


def test_corpus_format(tmp_path):
    p = tmp_path / "c.corpus"
    p.write_text("# comment\n\ny'' = -y ;; expect: y^2 + y'^2\ny'' = x*y\n")
    entries = read_corpus(p)
    assert [(e.line, e.ode, e.expect) for e in entries] == [
        (3, "y'' = -y", "y^2 + y'^2"), (4, "y'' = x*y", None)]


def test_empty_corpus(capsys, tmp_path):
    p = tmp_path / "empty.corpus"
    p.write_text("# nothing here\n")
    code, out, _ = run(capsys, "corpus", str(p))
    assert code == 0 and "0/0 passed" in out


def test_corpus_nothing_found_is_not_a_failure(capsys, tmp_path):
    p = tmp_path / "mixed.corpus"
    p.write_text("y'' = x*y ;; expect: y\ny'' = -y ;; expect: y^2 + y'^2\n")
    code, rep = run_json(capsys, "corpus", str(p), "--max-degree", "1", "--trajectories", "2")
    assert code == 0
    assert [e["status"] for e in rep["entries"]] == ["nothing-found", "pass"]
    assert rep["summary"] == {"total": 2, "passed": 1, "nothing_found": 1, "failed": 0}


def test_corpus_wrong_expectation_fails(capsys, tmp_path):
    p = tmp_path / "wrong.corpus"
    p.write_text("y'' = -y ;; expect: y'/(x*y^3)\n")
    code, rep = run_json(capsys, "corpus", str(p), "--trajectories", "0")
    assert code == 1 and rep["entries"][0]["status"] == "fail"


def test_corpus_missing_file(capsys):
    code, _, err = run(capsys, "corpus", "/nonexistent/file.corpus")
    assert code == 1 and "not found" in err


@pytest.mark.slow
def test_shipped_corpus_parallel(capsys):
    code, rep = run_json(capsys, "corpus", "--jobs", "2", "--trajectories", "3")
    assert code == 0
    assert rep["summary"]["passed"] == 3
    assert [e["ode"] for e in rep["entries"]] == [EX1, EX2, EX3]


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "psreduce.cli", "verify", EX1, "y^2 + y'^2",
                          "--trajectories", "0"], capture_output=True, text=True)
    assert res.returncode == 0 and "symbolic: true" in res.stdout


def test_timeout_env_var(monkeypatch):
    from psreduce.limits import Limits
    monkeypatch.setenv("PS2_TIMEOUT", "7.5")
    assert Limits().stage_timeout == 7.5
    assert Limits(timeout=2).stage_timeout == 2
