"""Doubling, cyclic-reduction and Newton solvers.

All iterations target the stabilizing solution, whose graph subspace
``[I; X]`` is the deflating subspace of ``M + z M^T`` for the
eigenvalues inside the unit disk.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (Breakdown, InitBreakdown, KernelDimensionMismatch,
                     NoConvergence, NumericallySingular)
from .kernels import UNIT_ROUNDOFF, lu_solver, rrqr
from .pencil import (build_M, build_dual, make_report, residual,
                     solution_from_basis)

__all__ = [
    "QuadCoeffs", "SsfPencil", "build_quad", "ssf_init", "ssf_double",
    "da_solve", "pda_step", "pda_solve", "cr1_solve", "cr2_solve", "newton_solve",
    "dual_solve", "default_eps", "DEFAULT_MAXIT",
]

DEFAULT_MAXIT = 64
#: minimum ratio between the last kept and first dropped rrqr diagonal
RANK_GAP = 10.0


def default_eps(n):
    """Default stopping threshold ``2 n u``."""
    return 2 * n * UNIT_ROUNDOFF


def _inf(X):
    return np.linalg.norm(X, np.inf)


def _factor(A, exc=Breakdown, what="pivot matrix"):
    try:
        return lu_solver(A)
    except NumericallySingular as e:
        raise exc(f"{what} is numerically singular") from e


def _kernel_basis(A, n, tol, gap):
    """Orthonormal basis of the n-dimensional numerical kernel of ``A``.

    From a rank-revealing QR of ``A^T`` (m x m, diagonal ``d``), the
    trailing n columns of the orthogonal factor span the kernel when
    ``d[m-n] <= tol d[0]`` and ``d[m-n-1] >= gap d[m-n]``. A small but
    separated ``d[m-n-1]`` is legitimate (nearly singular skew part).
    """
    f = rrqr(A.T, tol)
    d = f.diag
    m = A.shape[0]
    if not d[m - n] <= tol * d[0]:
        raise KernelDimensionMismatch(
            f"kernel smaller than {n}: |R[{m - n}, {m - n}]| = {d[m - n]:.3e}")
    if not d[m - n - 1] >= gap * d[m - n]:
        raise KernelDimensionMismatch(
            f"no rank gap: |R| diagonal {d[m - n - 1]:.3e} vs {d[m - n]:.3e}")
    return f.Q[:, m - n:], d


# -- quadraticization and cyclic reduction ------------------------------------

@dataclass
class QuadCoeffs:
    """Coefficients of ``Q(z) = Am1 + z A0 + z^2 A1``."""

    Am1: np.ndarray
    A0: np.ndarray
    A1: np.ndarray

    def __call__(self, z):
        return self.Am1 + z * self.A0 + z * z * self.A1


def build_quad(p):
    """Quadratic polynomial ``phi(z) [[0, I], [z I, 0]]``.

    ``Am1 = [[0, C], [0, A]]``, ``A0 = [[D, C^T], [-B, D^T]]``,
    ``A1 = [[A^T, 0], [-B^T, 0]]``.
    """
    A, B, C, D = p.A, p.B, p.C, p.D
    Z = np.zeros_like(A)
    return QuadCoeffs(np.block([[Z, C], [Z, A]]),
                      np.block([[D, C.T], [-B, D.T]]),
                      np.block([[A.T, Z], [-B.T, Z]]))


def cr1_solve(p, eps=None, maxit=DEFAULT_MAXIT):
    """Cyclic reduction on the quadratic ``Q(z)``.

    Computes the minimal solution ``G = [[0, X], [0, W]]`` of
    ``Am1 + A0 G + A1 G^2 = 0`` and returns its (1, 2) block.

    Raises
    ------
    Breakdown
        If ``A0`` becomes numerically singular.
    NoConvergence
    """
    n = p.n
    eps = default_eps(n) if eps is None else eps
    q = build_quad(p)
    Am1, A0, A1 = q.Am1.copy(), q.A0.copy(), q.A1.copy()
    Ahat = A0.copy()
    pattern = []
    for k in range(1, maxit + 1):
        solve = _factor(A0)
        Ym1 = solve(Am1)
        Y1 = solve(A1)
        Ahat = Ahat - A1 @ Ym1
        A0 = A0 - Am1 @ Y1 - A1 @ Ym1
        Am1, A1 = -Am1 @ Ym1, -A1 @ Y1
        pattern.append((
            _inf(Am1[:, :n]) / max(_inf(Am1), 1e-300),
            _inf(A1[:, n:]) / max(_inf(A1), 1e-300)))
        if _inf(A1) < eps * _inf(A0):
            break
    else:
        raise NoConvergence(f"cyclic reduction: no convergence in {maxit} steps")
    G = -_factor(Ahat)(q.Am1)
    X = G[:n, n:]
    info = {
        "G": G,
        "zero_pattern": pattern,
        "G_first_column": float(np.linalg.norm(G[:, :n], np.inf)
                                / max(_inf(G), 1e-300)),
        "spectral_radius": float(np.max(np.abs(np.linalg.eigvals(G[n:, n:])))),
    }
    return make_report(p, X, "cr1", k, info)


def cr2_solve(p, eps=None, maxit=DEFAULT_MAXIT, rank_tol=1e-8):
    """Cyclic reduction on the symmetric quadraticization.

    Starts from ``C = M^T M``, ``B_{-1} = -M^2``,
    ``B_0 = M^T M + M M^T`` and iterates::

        V     = B_{-1}^T B_0^{-1} B_{-1}
        C'    = C - V
        B_0'  = B_0 - V - B_{-1} B_0^{-1} B_{-1}^T
        B_-1' = -B_{-1} B_0^{-1} B_{-1}

    The limit of ``C`` is symmetric with an n-dimensional kernel equal to
    the stable deflating subspace; it is recovered from a rank-revealing
    QR; ``rank_tol`` bounds the kernel part relative to the largest entry.

    Raises
    ------
    Breakdown, KernelDimensionMismatch, NoConvergence
    """
    n = p.n
    eps = default_eps(n) if eps is None else eps
    M = build_M(p).M
    C = M.T @ M
    Bm1 = -M @ M
    B0 = M.T @ M + M @ M.T
    asym = []
    for k in range(1, maxit + 1):
        solve = _factor(B0)
        X1 = solve(Bm1)
        X2 = solve(Bm1.T)
        V = Bm1.T @ X1
        C = C - V
        B0 = B0 - V - Bm1 @ X2
        Bm1 = -Bm1 @ X1
        asym.append((_inf(B0 - B0.T) / max(_inf(B0), 1e-300),
                     _inf(C - C.T) / max(_inf(C), 1e-300)))
        # both updates are symmetric in exact arithmetic
        B0 = (B0 + B0.T) / 2
        C = (C + C.T) / 2
        if _inf(Bm1) < eps * _inf(B0):
            break
    else:
        raise NoConvergence(f"symmetric cyclic reduction: no convergence in {maxit} steps")
    basis, d = _kernel_basis(C, n, rank_tol, RANK_GAP)
    info = {"asymmetry": asym, "rrqr_diag": d}
    return solution_from_basis(p, basis, "cr2", k, info)


# -- doubling ----------------------------------------------------------------

@dataclass
class SsfPencil:
    """``[[E, 0], [-P, I]] + z [[I, -G], [0, F]]``."""

    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    P: np.ndarray

    def matrices(self):
        """The two 2n x 2n coefficients ``(L0, L1)`` of ``L0 + z L1``."""
        n = self.E.shape[0]
        I, Z = np.eye(n), np.zeros((n, n))
        L0 = np.block([[self.E, Z], [-self.P, I]])
        L1 = np.block([[I, -self.G], [Z, self.F]])
        return L0, L1


def ssf_init(P, return_transform=False):
    """Standard structured form right-equivalent to ``M + z M^T``.

    With ``K = [M^T[:, :n] | M[:, n:]]`` and ``W = K^{-1}``,
    ``W (M + z M^T)`` is exactly the structured pencil.

    Raises
    ------
    InitBreakdown
        If ``K`` is numerically singular.
    """
    M = P.M
    n = P.n
    K = np.hstack([M.T[:, :n], M[:, n:]])
    solve = _factor(K, InitBreakdown, "initial structured-form transformation")
    WM = solve(M)
    WMt = solve(M.T)
    out = SsfPencil(E=WM[:n, :n], F=WMt[n:, n:], G=-WMt[:n, n:], P=-WM[n:, :n])
    if return_transform:
        return out, solve(np.eye(2 * n))
    return out


def ssf_double(s):
    """One doubling step; squares the eigenvalues of the pencil."""
    n = s.E.shape[0]
    I = np.eye(n)
    s1 = _factor(I - s.G @ s.P)
    s2 = _factor(I - s.P @ s.G)
    # E and F blow up on critical pencils; callers check finiteness
    with np.errstate(over="ignore", invalid="ignore"):
        T1 = s1(np.hstack([s.E, s.G @ s.F]))
        T2 = s2(np.hstack([s.F, s.P @ s.E]))
        return SsfPencil(E=s.E @ T1[:, :n], F=s.F @ T2[:, :n],
                         G=s.G + s.E @ T1[:, n:], P=s.P + s.F @ T2[:, n:])


def da_solve(p, eps=None, maxit=DEFAULT_MAXIT):
    """Structured doubling; ``P_k`` converges to the stabilizing solution.

    Stops when ``||P_{k+1} - P_k||_inf <= eps ||P_{k+1}||_inf``.
    """
    eps = default_eps(p.n) if eps is None else eps
    s = ssf_init(build_M(p))
    for k in range(1, maxit + 1):
        s_new = ssf_double(s)
        if not all(np.isfinite(m).all() for m in (s_new.E, s_new.F, s_new.G, s_new.P)):
            raise Breakdown(f"doubling iterates overflowed at step {k}")
        dP = _inf(s_new.P - s.P)
        s = s_new
        if dP <= eps * _inf(s.P):
            break
    else:
        raise NoConvergence(f"doubling: no convergence in {maxit} steps")
    return make_report(p, s.P, "da", k)


def pda_step(H, K):
    """One palindromic doubling step ``(H + K H^{-1} K) / 2``, symmetrized.

    Raises
    ------
    Breakdown
        If ``H`` is numerically singular.
    """
    H_new = (H + K @ _factor(H)(K)) / 2
    return (H_new + H_new.T) / 2


def pda_solve(p, eps=None, maxit=DEFAULT_MAXIT, stall=3, rank_tol=1e-8):
    """Palindromic doubling ``H' = (H + K H^{-1} K) / 2``.

    ``H`` and ``K`` are the symmetric and skew parts of ``M``. The
    iteration is the matrix sign iteration on ``K^{-1} H``; in the limit
    the stable deflating subspace is the kernel of ``H_inf + K``, taken
    from a rank-revealing QR of its transpose.

    Stops on relative change below ``eps``; on the first non-decrease
    of the change once it is below ``sqrt(eps)`` (rounding level); or
    after ``stall`` consecutive non-decreasing steps.

    Raises
    ------
    Breakdown, NoConvergence, KernelDimensionMismatch, NotAGraphSubspace
    """
    n = p.n
    eps = default_eps(n) if eps is None else eps
    M = build_M(p).M
    H = (M + M.T) / 2
    K = (M - M.T) / 2
    if not np.any(K):
        raise NoConvergence("symmetric M: palindromic doubling degenerates (K = 0)")
    changes = []
    nondecr = 0
    floor = np.sqrt(eps)
    for k in range(1, maxit + 1):
        H_new = pda_step(H, K)
        d = _inf(H_new - H) / max(_inf(H_new), 1e-300)
        H = H_new
        prev = changes[-1] if changes else np.inf
        changes.append(d)
        if d <= eps:
            break
        if d >= prev:
            nondecr += 1
            # a non-decrease after a tiny step means rounding level is reached
            if prev <= floor or nondecr >= stall:
                break
        else:
            nondecr = 0
    else:
        raise NoConvergence(f"palindromic doubling: no convergence in {maxit} steps")
    basis, d = _kernel_basis(H + K, n, rank_tol, RANK_GAP)
    info = {"changes": changes, "rrqr_diag": d}
    return solution_from_basis(p, basis, "pda", k, info)


# -- Newton --------------------------------------------------------------------

def newton_solve(p, X0=None, eps=None, maxit=DEFAULT_MAXIT):
    """Newton's method; each step solves a T-Sylvester equation.

    ``(D - X_k^T B) H_k + H_k^T (A - B X_k) = -R(X_k)``,
    ``X_{k+1} = X_k + H_k``. No global convergence guarantee; the
    report's ``info["residuals"]`` lists the per-step residuals.

    Raises
    ------
    ReciprocalSpectrum, NoConvergence
    """
    from .antitri import t_sylvester_solve

    n = p.n
    eps = default_eps(n) if eps is None else eps
    X = np.zeros((n, n)) if X0 is None else np.array(X0, dtype=float)
    res = [residual(p, X)]
    for k in range(1, maxit + 1):
        H = t_sylvester_solve(p.D - X.T @ p.B, p.A - p.B @ X, p.riccati(X))
        X = X + H
        res.append(residual(p, X))
        if not np.all(np.isfinite(X)):
            raise NoConvergence("Newton iterates diverged")
        if _inf(H) <= eps * _inf(X):
            break
    else:
        raise NoConvergence(f"Newton: no convergence in {maxit} steps")
    return make_report(p, X, "newton", k, {"residuals": res})


# -- dual ----------------------------------------------------------------------

def dual_solve(p, method="palqz", **options):
    """Solve the dual equation ``A Y + Y^T D + Y^T C Y - B = 0``.

    Runs ``method`` on :func:`tnare.pencil.build_dual` of ``p``; the
    report's residual is the relative residual of the dual equation.
    """
    from .methods import solve

    rep = solve(build_dual(p), method, **options)
    rep.method = f"dual-{rep.method}"
    return rep
