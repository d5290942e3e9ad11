"""Problem data, the palindromic pencil, and solution metrics.

A T-NARE is ``R(X) = D X + X^T A - X^T B X + C = 0`` with real square
coefficients. Its solutions are read off n-dimensional deflating
subspaces of the T-palindromic pencil ``phi(z) = M + z M^T`` with::

    M = [[C,  D],
         [A, -B]]
"""

from dataclasses import dataclass, field
import json

import numpy as np

from .errors import (NotAGraphSubspace, NumericallySingular, ZeroReference)
from .kernels import gen_eigvals, solve_linear

__all__ = [
    "TNareProblem", "PalindromicPencil", "SolveReport", "NoncriticalReport",
    "build_M", "build_dual", "block_swap", "phi_eval", "pencil_spectrum",
    "is_noncritical", "residual", "forward_error", "solution_from_basis",
    "alpha_spectrum", "load_problem", "save_problem",
    "REAL_TOL", "GRAPH_RCOND",
]

#: relative size of Im X below which a solution is reported as real
REAL_TOL = 1e-8
#: reciprocal condition of U1 below which a basis is not a graph basis
GRAPH_RCOND = 1e-13


@dataclass(frozen=True)
class TNareProblem:
    """Coefficients of ``D X + X^T A - X^T B X + C = 0``."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        mats = []
        for name in "ABCD":
            m = np.atleast_2d(np.asarray(getattr(self, name), dtype=float))
            object.__setattr__(self, name, m)
            mats.append(m)
        n = mats[0].shape[0]
        if n < 1 or any(m.shape != (n, n) for m in mats):
            raise ValueError("A, B, C, D must be square with a common size n >= 1")
        if not all(np.isfinite(m).all() for m in mats):
            raise ValueError("coefficients must be finite")

    @property
    def n(self):
        return self.A.shape[0]

    def riccati(self, X):
        """Evaluate ``R(X)``."""
        A, B, C, D = self.A, self.B, self.C, self.D
        return D @ X + X.T @ A - X.T @ B @ X + C

    def to_dict(self):
        return {"n": self.n, **{k: getattr(self, k).tolist() for k in "ABCD"}}

    @classmethod
    def from_dict(cls, d):
        p = cls(*(np.array(d[k], dtype=float) for k in "ABCD"))
        if "n" in d and int(d["n"]) != p.n:
            raise ValueError(f"declared n={d['n']} but matrices are {p.n}x{p.n}")
        return p


@dataclass(frozen=True)
class PalindromicPencil:
    """The pencil ``M + z M^T``; only ``M`` is stored."""

    M: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.M)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise ValueError("M must be square of even size")
        object.__setattr__(self, "M", M)

    @property
    def n(self):
        return self.M.shape[0] // 2

    @property
    def size(self):
        return self.M.shape[0]


@dataclass
class SolveReport:
    """Outcome of a solver run.

    Attributes
    ----------
    X : ndarray
        The solution; real when the imaginary part was negligible.
    method : str
    iterations : int
    residual : float
        Relative residual, see :func:`residual`.
    alpha_spectrum : ndarray
        Eigenvalues of ``alpha(z) = A - B X + z (D^T - B^T X)``.
    stabilizing : bool
        True iff every ``alpha_spectrum`` entry has modulus < 1.
    is_real : bool
    info : dict
        Method-specific diagnostics.
    """

    X: np.ndarray
    method: str
    iterations: int
    residual: float
    alpha_spectrum: np.ndarray
    stabilizing: bool
    is_real: bool = True
    info: dict = field(default_factory=dict)

    def to_json_dict(self):
        X = self.X
        out = {
            "method": self.method,
            "iterations": int(self.iterations),
            "residual": float(self.residual),
            "stabilizing": bool(self.stabilizing),
            "is_real": bool(self.is_real),
            "alpha_spectrum": [[float(z.real), float(z.imag)]
                               for z in np.asarray(self.alpha_spectrum, complex)],
        }
        if np.iscomplexobj(X):
            out["X"] = X.real.tolist()
            out["X_imag"] = X.imag.tolist()
        else:
            out["X"] = X.tolist()
        return out


@dataclass(frozen=True)
class NoncriticalReport:
    min_gap: float
    min_sv_on_circle: float
    verdict: bool


def build_M(p):
    """Assemble ``M = [[C, D], [A, -B]]``."""
    return PalindromicPencil(np.block([[p.C, p.D], [p.A, -p.B]]))


def build_dual(p):
    """Dual problem ``(A', B', C', D') = (D, -C, -B, A)``.

    Its residual map is ``A Y + Y^T D + Y^T C Y - B`` and its pencil
    matrix is ``Pi M Pi`` with ``Pi`` the block swap.
    """
    return TNareProblem(p.D, -p.C, -p.B, p.A)


def block_swap(n):
    """Permutation ``[[0, I], [I, 0]]`` of size 2n."""
    I, Z = np.eye(n), np.zeros((n, n))
    return np.block([[Z, I], [I, Z]])


def phi_eval(P, z):
    """Evaluate ``M + z M^T``."""
    return P.M + z * P.M.T


def pencil_spectrum(P):
    """The 2n eigenvalues of ``M + z M^T`` (``inf`` allowed).

    Computed as generalized eigenvalues of ``(-M, M^T)``.

    Raises
    ------
    SingularPencil
    """
    return gen_eigvals(-P.M, P.M.T)


def is_noncritical(P, grid=64, tol=1e-12):
    """Test for eigenvalues on the unit circle.

    Parameters
    ----------
    P : PalindromicPencil
    grid : int
        Number of unit-circle samples, at least 8.
    tol : float
        Threshold on both ``||lambda| - 1|`` and the scaled smallest
        singular value ``sigma_min(phi(z)) / ||M||``.
    """
    if grid < 8:
        raise ValueError("grid must be at least 8")
    lam = pencil_spectrum(P)
    gap = float(np.min(np.abs(np.abs(lam) - 1.0)))
    z = np.exp(2j * np.pi * (np.arange(grid) + 0.5) / grid)
    z = np.concatenate([z, [1.0, -1.0]])
    mats = P.M[None] + z[:, None, None] * P.M.T[None]
    smin = float(np.min(np.linalg.svd(mats, compute_uv=False)[:, -1]))
    nrm = np.linalg.norm(P.M, 2)
    verdict = bool(gap > tol and nrm > 0 and smin > tol * nrm)
    return NoncriticalReport(gap, smin, verdict)


def residual(p, X, ord=2):
    """Relative residual of ``X``.

    ``||R(X)|| / (||D|| ||X|| + ||X|| ||A|| + ||X||^2 ||B|| + ||C||)``,
    spectral norm by default (``ord="fro"`` for Frobenius).
    """
    nrm = lambda Y: np.linalg.norm(Y, ord)
    nx = nrm(X)
    den = nrm(p.D) * nx + nx * nrm(p.A) + nx * nx * nrm(p.B) + nrm(p.C)
    num = nrm(p.riccati(X))
    if den == 0:
        return 0.0 if num == 0 else float("inf")
    return float(num / den)


def forward_error(X, Xref, ord=2):
    """``||X - Xref|| / ||Xref||``.

    Raises
    ------
    ZeroReference
    """
    d = np.linalg.norm(Xref, ord)
    if d == 0:
        raise ZeroReference("reference solution is zero")
    return float(np.linalg.norm(np.asarray(X) - Xref, ord) / d)


def alpha_spectrum(p, X):
    """Eigenvalues of ``alpha(z) = (A - B X) + z (D^T - B^T X)``."""
    return gen_eigvals(-(p.A - p.B @ X), p.D.T - p.B.T @ X)


def _realify(X, tol=REAL_TOL):
    if not np.iscomplexobj(X):
        return X, True
    nx = np.linalg.norm(X, 2)
    if np.linalg.norm(X.imag, 2) <= tol * nx:
        return np.ascontiguousarray(X.real), True
    return X, False


def solution_from_basis(p, basis, method="basis", iterations=0, info=None,
                        real_tol=REAL_TOL, graph_rcond=GRAPH_RCOND):
    """Extract ``X = U2 U1^{-1}`` from a 2n x n basis ``[U1; U2]``.

    Raises
    ------
    NotAGraphSubspace
        If ``U1`` is numerically singular.
    """
    n = p.n
    basis = np.asarray(basis)
    if basis.shape != (2 * n, n):
        raise ValueError(f"basis must be {2 * n}x{n}, got {basis.shape}")
    U1, U2 = basis[:n], basis[n:]
    try:
        X = solve_linear(U1.T, U2.T, rcond_min=graph_rcond).T
    except NumericallySingular as exc:
        raise NotAGraphSubspace(
            "leading block of the subspace basis is singular") from exc
    X, is_real = _realify(X, real_tol)
    return make_report(p, X, method, iterations, info, is_real)


def make_report(p, X, method, iterations, info=None, is_real=None):
    """Assemble a :class:`SolveReport` for a computed ``X``."""
    if is_real is None:
        X, is_real = _realify(X)
    lam = alpha_spectrum(p, X)
    return SolveReport(
        X=X, method=method, iterations=int(iterations),
        residual=residual(p, X), alpha_spectrum=lam,
        stabilizing=bool(np.all(np.abs(lam) < 1)), is_real=is_real,
        info=dict(info or {}))


def load_problem(path):
    """Read a problem from a JSON file ``{"n", "A", "B", "C", "D"}``."""
    with open(path) as fh:
        return TNareProblem.from_dict(json.load(fh))


def save_problem(p, path):
    with open(path, "w") as fh:
        json.dump(p.to_dict(), fh)
