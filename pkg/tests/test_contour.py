import time

import numpy as np
import pytest

from tnare.bench import gen_example1, gen_synthetic, synthetic_problem
from tnare.contour import (closed_form_oracle, dft_coefficient_oracle, int_solve,
                           trapezoid_projector)
from tnare.errors import NodeSingular, NotAGraphSubspace, NumericallySingular, RankAmbiguous
from tnare.pencil import PalindromicPencil, build_M, pencil_spectrum
from tnare.kernels import rrqr

from conftest import nongraph_problem, rel, well_conditioned

P2 = PalindromicPencil([[0.0, 1], [2, 0]])


def well_conditioned_pencil(n, seed):
    for s in range(seed, seed + 50):
        P = build_M(well_conditioned(n, s)[0])
        if np.linalg.cond(P.M) < 1e3:
            return P
    raise RuntimeError("no well-conditioned draw")


def test_trapezoid_2x2_limit():
    A = trapezoid_projector(P2, 6)
    assert np.allclose(A.Pi, np.diag([0, 1]), atol=1e-15)


def test_trapezoid_2x2_closed_form_k3():
    expected = np.diag([1 / (1 - 256), 1 / (1 - 2.0 ** -8)])
    assert np.allclose(closed_form_oracle(P2, 3), expected, rtol=1e-14)
    assert np.allclose(trapezoid_projector(P2, 3).Pi, expected, rtol=1e-12)


@pytest.mark.parametrize("k", [1, 3])
def test_trapezoid_critical(k):
    with pytest.raises(NodeSingular):
        trapezoid_projector(PalindromicPencil([[0.0, 1], [1, 0]]), k)


def test_trapezoid_bad_k():
    with pytest.raises(ValueError):
        trapezoid_projector(P2, 0)


def test_idempotence_example1():
    assert trapezoid_projector(build_M(gen_example1(10)), 8).idempotence_gap() <= 1e-10


def test_closed_form_orthogonal_symmetric():
    with pytest.raises(NumericallySingular):
        closed_form_oracle(PalindromicPencil([[0.0, 1], [1, 0]]), 2)


def narrow_annulus_pencil(n=3, seed=0):
    """Well-conditioned M with spectrum in 0.9 <= |lam| <= 1/0.9.

    Repeated squaring in the closed form has condition ~ rho(M^{-T} M)^(2^k),
    so the comparison at k = 6 needs a spectrum close to the unit circle.
    """
    rng = np.random.default_rng(seed)
    X, B = rng.standard_normal((2, n, n))
    D = rng.standard_normal((n, n)) + 3 * np.eye(n)
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    W = Q @ np.diag(rng.uniform(0.9, 0.95, n)) @ Q.T
    P = build_M(synthetic_problem(X, B, D, W))
    assert np.linalg.cond(P.M) < 1e3
    return P


@pytest.mark.parametrize("k", range(1, 7))
def test_trapezoid_vs_closed_form(k):
    P = narrow_annulus_pencil()
    Pi = trapezoid_projector(P, k).Pi
    assert rel(Pi, closed_form_oracle(P, k)) <= 1e-10


@pytest.mark.parametrize("k", [1, 2, 4, 6])
def test_trapezoid_vs_dft(k):
    P = well_conditioned_pencil(3, 20)
    A = trapezoid_projector(P, k)
    assert rel(A.S / 2 ** k, dft_coefficient_oracle(P, k)) <= 1e-12


def test_dft_2x2_limit():
    # I(M) = Pi M^{-T} with Pi = diag(0, 1)
    I = dft_coefficient_oracle(P2, 7)
    assert np.allclose(I, [[0, 0], [0.5, 0]], atol=1e-15)


def test_dft_error_squares():
    Pi_inf = np.diag([0.0, 1.0])
    errs = [np.linalg.norm(trapezoid_projector(P2, k).Pi - Pi_inf) for k in range(1, 6)]
    for e0, e1 in zip(errs, errs[1:]):
        assert 0.1 <= e1 / e0 ** 2 <= 10


def test_projector_monotone():
    P = build_M(gen_example1(10))
    lam = pencil_spectrum(P)
    assert np.min(np.abs(np.abs(lam) - 1)) >= 0.1
    gaps = [trapezoid_projector(P, k).idempotence_gap() for k in range(3, 9)]
    floor = 1e-13
    for g0, g1 in zip(gaps, gaps[1:]):
        assert g1 <= g0 or g1 <= floor


def test_range_isotropy():
    p, _ = well_conditioned(5, 3)
    P = build_M(p)
    Q = rrqr(trapezoid_projector(P, 10).Pi).Q[:, :5]
    assert np.linalg.norm(Q.T @ P.M @ Q, 2) <= 1e-8 * np.linalg.norm(P.M, 2)


def test_int_example1():
    r = int_solve(gen_example1(10), 8)
    assert r.residual <= 1e-13 and r.iterations == 8


def test_int_ill_conditioned():
    p, _ = gen_synthetic(3, 1e-5, 0)
    assert int_solve(p, 22).residual <= 1e-10


def test_int_not_graph():
    with pytest.raises(NotAGraphSubspace):
        int_solve(nongraph_problem(), 6)


def test_int_rank_ambiguous():
    p, _ = gen_synthetic(3, 1e-5, 0)
    with pytest.raises(RankAmbiguous):
        int_solve(p, 1)


def test_cost_doubles_per_k():
    P = build_M(gen_example1(20))
    trapezoid_projector(P, 8)
    times = []
    for k in (11, 12, 13):
        t0 = time.perf_counter()
        trapezoid_projector(P, k)
        times.append(time.perf_counter() - t0)
    ratios = np.array(times[1:]) / np.array(times[:-1])
    assert np.all((ratios > 1.5) & (ratios < 3.0)), ratios
