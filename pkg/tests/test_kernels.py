import numpy as np
import pytest

from tnare.errors import NumericallySingular, SingularPencil
from tnare.kernels import gen_eigvals, ordered_gen_schur, qr, rrqr, solve_linear

from conftest import match_multisets


def test_qr_identity():
    Q, R = qr(np.eye(2))
    assert np.allclose(np.abs(Q), np.eye(2)) and np.allclose(np.abs(R), np.eye(2))
    assert np.allclose(Q @ R, np.eye(2))


def test_qr_permutation():
    A = np.array([[0.0, 1], [1, 0]])
    Q, R = qr(A)
    assert np.allclose(np.abs(R), np.eye(2))
    assert np.allclose(np.abs(Q), A)
    assert np.allclose(Q @ R, A)


def test_qr_rotor_pattern():
    A = np.array([[-1.0, 1], [1, 0]])
    Q, R = qr(A)
    assert abs((Q.conj().T @ A)[1, 0]) < 1e-15
    assert np.linalg.norm(Q @ R - A) < 1e-15
    assert np.linalg.norm(Q.conj().T @ Q - np.eye(2)) < 1e-15


def test_rrqr_zero():
    assert rrqr(np.zeros((2, 2))).rank == 0


def test_rrqr_threshold():
    assert rrqr(np.diag([1.0, 1e-20]), tol=1e-12).rank == 1


def test_rrqr_outer_product(rng):
    u, v = rng.standard_normal(5), rng.standard_normal(5)
    A = np.outer(u / np.linalg.norm(u), v / np.linalg.norm(v))
    f = rrqr(A)
    assert f.rank == 1 == np.sum(np.linalg.svd(A, compute_uv=False) > 1e-12)


def test_rrqr_rejects_bad_tol():
    with pytest.raises(ValueError):
        rrqr(np.eye(2), tol=0.0)


def test_rrqr_invariants(rng):
    A = rng.standard_normal((20, 20))
    f = rrqr(A)
    assert np.linalg.norm(f.Q @ f.R - A[:, f.perm]) <= 1e-12 * np.linalg.norm(A)
    assert np.all(np.diff(f.diag) <= 0)


def test_ordered_schur_diagonal():
    g = ordered_gen_schur(np.diag([2.0, 0.5]), np.eye(2), lambda lam: abs(lam) < 1)
    assert g.selected == 1
    assert abs(abs(g.Z[1, 0]) - 1) < 1e-14


def test_ordered_schur_identity_pair():
    g = ordered_gen_schur(np.eye(2), np.eye(2), lambda lam: abs(lam) < 1)
    assert g.selected == 0


def test_ordered_schur_vs_determinant_oracle(rng):
    A, B = rng.standard_normal((6, 6)), rng.standard_normal((6, 6))
    # det(A - lam B) is a degree-6 polynomial; interpolate it at 7 nodes
    nodes = 2.0 * np.exp(2j * np.pi * np.arange(7) / 7)
    vals = [np.linalg.det(A - z * B) for z in nodes]
    coef = np.polyfit(nodes, vals, 6)
    roots = np.roots(coef)
    g = ordered_gen_schur(A, B, lambda lam: abs(lam) < 1)
    assert match_multisets(g.eigenvalues, roots) < 1e-8
    k = g.selected
    assert k == np.sum(np.abs(roots) < 1)
    assert np.all(np.abs(g.eigenvalues[:k]) < 1)


def test_ordered_schur_reconstruction(rng):
    A, B = rng.standard_normal((20, 20)), rng.standard_normal((20, 20))
    g = ordered_gen_schur(A, B, lambda lam: abs(lam) < 1)
    Zh = g.Z.conj().T
    assert np.linalg.norm(g.Q @ g.S @ Zh - A) <= 1e-12 * np.linalg.norm(A)
    assert np.linalg.norm(g.Q @ g.T @ Zh - B) <= 1e-12 * np.linalg.norm(B)
    assert np.allclose(np.tril(g.S, -1), 0) and np.allclose(np.tril(g.T, -1), 0)


def test_ordered_schur_singular_pencil():
    A = np.array([[1.0, 0], [0, 0]])
    with pytest.raises(SingularPencil):
        ordered_gen_schur(A, A)


def test_palindromic_pairing(rng):
    M = rng.standard_normal((8, 8))
    lam = gen_eigvals(-M, M.T)
    assert match_multisets(1 / lam, lam) < 1e-8


def test_solve_linear_examples(rng):
    B = rng.standard_normal((3, 4))
    assert np.array_equal(solve_linear(np.eye(3), B), B)
    assert np.allclose(solve_linear(2 * np.eye(3), np.eye(3)), np.eye(3) / 2)
    A, B = rng.standard_normal((8, 8)), rng.standard_normal((8, 3))
    X = solve_linear(A, B)
    assert np.linalg.norm(A @ X - B) / np.linalg.norm(B) <= 1e-12


def test_solve_linear_singular():
    with pytest.raises(NumericallySingular):
        solve_linear(np.array([[1.0, 1], [1, 1]]), np.eye(2))
