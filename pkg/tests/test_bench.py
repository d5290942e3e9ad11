import numpy as np
import pytest

from tnare.antitri import antitriangular_mask
from tnare.bench import (ProblemSpec, ResultTable, gen_example1, gen_example2,
                         gen_random_antitriangular, gen_synthetic, laplacian_2d,
                         make_problem, run_suite, swap_benchmark, synthetic_problem)
from tnare.errors import GenerationFailed
from tnare.pencil import alpha_spectrum, build_M, is_noncritical, pencil_spectrum, residual


def test_example1_entries():
    p = gen_example1(10)
    A = -p.B * np.linalg.norm(p.A, "fro")
    assert p.D[0, 0] == 4 and p.A[0, 1] == -1
    E = p.C * np.sqrt(18.81)
    assert abs(E[9, 9] + 0.9) < 1e-14
    assert np.allclose(A, p.A)
    assert abs(np.linalg.norm(E, "fro") ** 2 - 18.81) < 1e-12


def test_example1_noncritical_and_solved():
    from tnare.antitri import palqz_solve
    p = gen_example1(10)
    assert is_noncritical(build_M(p)).verdict
    assert palqz_solve(p).residual <= 1e-13


def test_example1_bad_n():
    with pytest.raises(ValueError):
        gen_example1(1)


def test_example2_sizes():
    assert gen_example2(18, 0).n == 324
    assert gen_example2(28, 0).n == 784


def test_example2_stencil():
    p = gen_example2(3, 1)
    L = p.A
    assert np.array_equal(L, p.D) and np.array_equal(L, laplacian_2d(3))
    assert np.all(np.diag(L) == 4)
    off = L - 4 * np.eye(9)
    # neighbour counts on a 3x3 grid: corners 2, edges 3, centre 4
    assert sorted(set((-off.sum(axis=1)).astype(int))) == [2, 3, 4]
    assert sorted(set(L.sum(axis=1).astype(int))) == [0, 1, 2]
    assert np.all((p.B >= 0) & (p.B < 1)) and np.all((p.C >= 0) & (p.C < 1))


def test_example2_deterministic():
    a, b = gen_example2(4, 7), gen_example2(4, 7)
    assert np.array_equal(a.B, b.B) and np.array_equal(a.C, b.C)
    assert not np.array_equal(a.B, gen_example2(4, 8).B)


def test_synthetic_hand_example():
    p = synthetic_problem([[1.0]], [[1.0]], [[2.0]], [[0.5]])
    assert p.A[0, 0] == 1.5 and p.C[0, 0] == -2.5
    assert residual(p, np.array([[1.0]])) <= 1e-15


@pytest.mark.parametrize("n,sigma,seed", [(1, 0.1, 0), (3, 1e-5, 1), (6, 1e-10, 2), (10, 0.5, 3)])
def test_synthetic_exact(n, sigma, seed):
    p, X = gen_synthetic(n, sigma, seed)
    assert residual(p, X) <= 1e-13
    lam = alpha_spectrum(p, X)
    assert np.all(np.abs(lam) < 1)
    assert np.min(np.abs(np.abs(lam) - 1)) == pytest.approx(sigma / (1 + sigma), rel=1e-3)


def test_synthetic_near_unit_pair():
    p, _ = gen_synthetic(3, 1e-5, 0)
    lam = pencil_spectrum(build_M(p))
    assert np.min(np.abs(np.abs(lam) - 1)) == pytest.approx(1e-5, rel=1e-2)


def test_synthetic_generation_failed():
    with pytest.raises(GenerationFailed):
        gen_synthetic(3, 0.1, 0, kappa_max=1.0)


def test_synthetic_bad_args():
    with pytest.raises(ValueError):
        gen_synthetic(0, 0.1)
    with pytest.raises(ValueError):
        gen_synthetic(2, 0.0)


def test_random_antitriangular_pattern():
    F = gen_random_antitriangular(8, 3)
    mask = antitriangular_mask(8)
    assert np.all(F.N[mask] == 0) and np.all(F.N[~mask] != 0)
    assert np.array_equal(F.U, np.eye(8))
    assert F.is_regular(1e-12)
    with pytest.raises(ValueError):
        gen_random_antitriangular(7)


def test_make_problem_file(tmp_path):
    from tnare.pencil import save_problem
    p = gen_example1(4)
    save_problem(p, tmp_path / "p.json")
    q, ref = make_problem(ProblemSpec("f", "file", {"path": tmp_path / "p.json"}))
    assert ref is None and np.array_equal(q.A, p.A)
    with pytest.raises(ValueError):
        make_problem(ProblemSpec("x", "nope"))


def test_suite_example1(tmp_path):
    out = tmp_path / "r.csv"
    t = run_suite([ProblemSpec("example1", "example1", {"n": 10})], out=out)
    assert len(t) == 7
    for r in t:
        assert r.status == "ok" and r.res <= 1e-12
        assert r.res == residual(gen_example1(10), _solution(r))
    lines = out.read_text().splitlines()
    assert lines[0] == "problem,method,res,err,iterations,wall_ms,status"
    assert len(lines) == 8
    md = t.to_markdown().splitlines()
    assert md[0].startswith("| problem") and len(md) == 9


def _solution(row):
    from tnare.methods import solve
    k = row.iterations if row.method == "int" else None
    return solve(gen_example1(10), row.method, k=k).X


def test_suite_cr2_sigma_1e10():
    t = run_suite([ProblemSpec("s", "synthetic", {"n": 3, "sigma": 1e-10})], ["cr2"])
    r = t[0]
    assert r.status == "ok" or r.res is None


def test_suite_empty_methods():
    assert len(run_suite([ProblemSpec("example1", "example1")], [])) == 0


def test_suite_rows_consistent():
    t = run_suite([ProblemSpec("s", "synthetic", {"n": 3, "sigma": 1e-10})])
    for r in t:
        assert (r.res is not None) == (r.status == "ok")
    assert t.get("s", "int").status.startswith("skipped")
    for r in t:
        if r.status == "ok":
            assert r.err is not None and r.iterations is not None
    with pytest.raises(KeyError):
        t.get("s", "newton")


def test_suite_stabilizing_rows():
    from tnare.methods import solve
    p, _ = gen_synthetic(3, 1e-5, 0)
    for m in ("qz", "palqz", "da", "cr1", "pda"):
        lam = solve(p, m).alpha_spectrum
        assert np.all(np.abs(lam) < 1)


def test_suite_deterministic():
    specs = [ProblemSpec("s", "synthetic", {"n": 3, "sigma": 1e-3, "seed": 4})]
    a = run_suite(specs, ["palqz", "da"])
    b = run_suite(specs, ["palqz", "da"])
    assert [(r.res, r.err, r.iterations) for r in a] == [(r.res, r.err, r.iterations) for r in b]


def test_swap_benchmark_small():
    rows = swap_benchmark([8, 16], reps=2, seed=1)
    assert [r["n"] for r in rows] == [8, 16]
    for r in rows:
        assert r["certified"] and r["max_congruence_error"] <= 1e-10
        assert r["mean_swaps"] > 0
    assert swap_benchmark([8], reps=0) == []
    with pytest.raises(ValueError):
        swap_benchmark([9], reps=1)


def test_result_table_csv_empty_fields():
    from tnare.bench import ResultRow
    t = ResultTable([ResultRow("p", "m", None, None, None, 1.0, "Breakdown")])
    assert t.to_csv().splitlines()[1] == "p,m,,,,1.000000e+00,Breakdown"
