"""Contour-integral projector onto the stable deflating subspace.

With ``N = 2^k`` nodes ``zeta^j``, ``zeta = exp(2 pi i / N)``, the
trapezoidal sum ``S = sum_j zeta^j phi(zeta^j)^{-1}`` gives
``Pi = S M^T / N``, which converges to a projector whose range is the
stable deflating subspace of ``M + z M^T``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NodeSingular, RankAmbiguous
from .kernels import UNIT_ROUNDOFF, rrqr, solve_linear
from .pencil import build_M, solution_from_basis

__all__ = ["ProjectorApprox", "trapezoid_projector", "closed_form_oracle",
           "dft_coefficient_oracle", "int_solve", "RANK_GAP", "DEFAULT_LOG2_NODES"]

#: minimum ratio |R[n-1, n-1]| / |R[n, n]| accepted when reading the rank
RANK_GAP = 10.0
DEFAULT_LOG2_NODES = 10
_CHUNK_BYTES = 1 << 25


@dataclass
class ProjectorApprox:
    k: int
    S: np.ndarray
    Pi: np.ndarray

    def idempotence_gap(self):
        """``||Pi^2 - Pi|| / ||Pi||`` (spectral norm)."""
        return float(np.linalg.norm(self.Pi @ self.Pi - self.Pi, 2)
                     / np.linalg.norm(self.Pi, 2))


def _norm1(M):
    return np.abs(M).sum(axis=0).max()


def _node_inverses(M, j, N, cond_max):
    """``zeta^{j/2} (zeta^{-j/2} M + zeta^{j/2} M^T)^{-1}`` for each ``j``.

    The matrix in parentheses is Hermitian for real ``M``.
    """
    h = np.exp(1j * np.pi * j / N)
    mats = h.conj()[:, None, None] * M[None] + h[:, None, None] * M.T[None]
    try:
        inv = np.linalg.inv(mats)
    except np.linalg.LinAlgError as exc:
        raise NodeSingular("pencil singular at a quadrature node") from exc
    # scale by ||M||, not by the rotated matrix: near a critical node the
    # rotated matrix is a tiny multiple of a well-conditioned one
    cond = 2 * _norm1(M) * np.abs(inv).sum(axis=1).max(axis=1)
    bad = ~(cond < cond_max)
    if bad.any():
        jb = int(j[np.argmax(bad)])
        raise NodeSingular(f"pencil nearly singular at node {jb} of {N} "
                           f"(condition {cond[np.argmax(bad)]:.2e})")
    return h[:, None, None] * inv


def _trapezoid_sum(M, k, cond_max=None):
    m = M.shape[0]
    N = 1 << k
    if cond_max is None:
        cond_max = 1.0 / (m * UNIT_ROUNDOFF)
    real = not np.iscomplexobj(M)
    chunk = max(1, _CHUNK_BYTES // (16 * m * m * 3))
    if real:
        # terms at j and N - j are complex conjugates
        js = np.arange(0, N // 2 + 1)
        w = np.where((js == 0) | (js == N // 2), 1.0, 2.0)
    else:
        js = np.arange(N)
        w = np.ones(N)
    S = np.zeros((m, m), dtype=complex)
    for s in range(0, js.size, chunk):
        jj = js[s:s + chunk]
        T = _node_inverses(M, jj, N, cond_max)
        S += np.einsum("j,jab->ab", w[s:s + chunk], T)
    return S.real.copy() if real else S


def trapezoid_projector(P, k):
    """Trapezoidal approximation with ``2^k`` nodes.

    Raises
    ------
    NodeSingular
        If ``phi`` is (nearly) singular at some node.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    M = np.asarray(P.M)
    S = _trapezoid_sum(M, k)
    return ProjectorApprox(k, S, S @ M.T / (1 << k))


def closed_form_oracle(P, k):
    """``(I - (-M^{-T} M)^{2^k})^{-1}`` by repeated squaring.

    Raises
    ------
    NumericallySingular
        If ``M`` or ``I - (-M^{-T} M)^{2^k}`` is numerically singular.
    """
    M = np.asarray(P.M)
    T = -solve_linear(M.T, M)
    for _ in range(k):
        T = T @ T
    I = np.eye(M.shape[0])
    return solve_linear(I - T, I)


def dft_coefficient_oracle(P, k):
    """Coefficient of ``z^{N-1}`` of the polynomial interpolating
    ``phi(z)^{-1}`` at the N-th roots of unity, via the FFT.

    Equals ``S / N`` of :func:`trapezoid_projector` identically.
    """
    M = np.asarray(P.M)
    N = 1 << k
    z = np.exp(2j * np.pi * np.arange(N) / N)
    mats = M[None] + z[:, None, None] * M.T[None]
    try:
        F = np.linalg.inv(mats)
    except np.linalg.LinAlgError as exc:
        raise NodeSingular("pencil singular at a root of unity") from exc
    cond = 2 * _norm1(M) * np.abs(F).sum(axis=1).max(axis=1)
    if not np.all(cond < 1.0 / (M.shape[0] * UNIT_ROUNDOFF)):
        raise NodeSingular("pencil nearly singular at a root of unity")
    return np.fft.fft(F, axis=0)[N - 1] / N


def int_solve(p, k=DEFAULT_LOG2_NODES, rank_gap=RANK_GAP):
    """Solve via the trapezoidal projector with ``2^k`` nodes.

    The first n columns of the orthogonal factor of a rank-revealing QR
    of ``Pi`` form the subspace basis.

    Raises
    ------
    NodeSingular, RankAmbiguous, NotAGraphSubspace
    """
    n = p.n
    P = build_M(p)
    A = trapezoid_projector(P, k)
    f = rrqr(A.Pi)
    d = f.diag
    ratio = d[n - 1] / d[n] if d[n] > 0 else np.inf
    if not ratio >= rank_gap:
        raise RankAmbiguous(f"rank gap {ratio:.3g} below {rank_gap}")
    info = {"k": k, "rank_gap": float(ratio), "idempotence_gap": A.idempotence_gap()}
    return solution_from_basis(p, f.Q[:, :n], "int", k, info)
