import json
import subprocess
import sys

import pytest

from tnare.bench import gen_example1
from tnare.cli import EXIT_INPUT, EXIT_OK, EXIT_SOLVER, main
from tnare.pencil import TNareProblem, save_problem


@pytest.fixture
def ex1(tmp_path):
    path = tmp_path / "ex1.json"
    save_problem(gen_example1(6), path)
    return path


def test_solve_writes_report(ex1, tmp_path):
    out = tmp_path / "x.json"
    assert main(["solve", "--input", str(ex1), "--method", "da", "--output", str(out)]) == EXIT_OK
    d = json.loads(out.read_text())
    assert set(d) >= {"X", "residual", "iterations", "stabilizing", "alpha_spectrum"}
    assert d["residual"] <= 1e-12 and d["stabilizing"]


@pytest.mark.parametrize("method", ["qz", "palqz", "pda", "cr1", "cr2", "newton"])
def test_solve_methods(ex1, method, capsys):
    assert main(["solve", "--input", str(ex1), "--method", method]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["residual"] <= 1e-12


def test_solve_int_nodes(ex1, capsys):
    assert main(["solve", "--input", str(ex1), "--method", "int", "--nodes-log2", "7"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["iterations"] == 7


def test_solve_solver_error(tmp_path):
    path = tmp_path / "ng.json"
    save_problem(TNareProblem([[2.0]], [[0.0]], [[0.0]], [[1.0]]), path)
    assert main(["solve", "--input", str(path), "--method", "palqz"]) == EXIT_SOLVER


def test_solve_bad_inputs(tmp_path):
    assert main(["solve", "--input", str(tmp_path / "missing.json")]) == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["solve", "--input", str(bad)]) == EXIT_INPUT
    shape = tmp_path / "shape.json"
    shape.write_text(json.dumps({"n": 1, "A": [[1]], "B": [[1, 2]], "C": [[1]], "D": [[1]]}))
    assert main(["solve", "--input", str(shape)]) == EXIT_INPUT
    assert main(["solve", "--input", str(shape), "--method", "nope"]) == EXIT_INPUT
    assert main(["frobnicate"]) == EXIT_INPUT


def test_bench_synthetic(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert main(["bench", "--suite", "synthetic", "--sigma", "0.01", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "problem,method,res,err,iterations,wall_ms,status"
    assert len(lines) == 8
    assert "| problem" in capsys.readouterr().out


def test_swapbench(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["swapbench", "--sizes", "8,16", "--reps", "2", "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "n,mean_time_s,mean_swaps" and len(lines) == 3
    assert main(["swapbench", "--sizes", "7"]) == EXIT_INPUT
    assert main(["swapbench", "--sizes", "8", "--reps", "-1"]) == EXIT_INPUT


def test_check(ex1, capsys):
    assert main(["check", "--input", str(ex1), "--grid", "32"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0].split()[:2] == ["condition", "verdict"] and len(out) == 6
    assert main(["check", "--input", str(ex1), "--grid", "4"]) == EXIT_INPUT


def test_module_entry_point(ex1):
    r = subprocess.run([sys.executable, "-m", "tnare", "solve", "--input", str(ex1)],
                       capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["method"] == "palqz"
