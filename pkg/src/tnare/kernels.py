"""Dense linear-algebra building blocks.

Every other module routes its factorizations and linear solves through
the handful of functions defined here, so that conditioning checks live
in one place.
"""

from dataclasses import dataclass
import warnings

import numpy as np
import scipy.linalg as sla

from .errors import NumericallySingular, SingularPencil

__all__ = [
    "UNIT_ROUNDOFF", "RankRevealingQR", "OrderedGeneralizedSchur",
    "qr", "rrqr", "ordered_gen_schur", "gen_eigvals", "solve_linear",
    "lu_solver",
]

#: binary64 unit roundoff
UNIT_ROUNDOFF = np.finfo(float).eps / 2


@dataclass(frozen=True)
class RankRevealingQR:
    """Column-pivoted QR ``A[:, perm] = Q @ R`` with a numerical rank."""

    Q: np.ndarray
    R: np.ndarray
    perm: np.ndarray
    rank: int
    tol: float

    @property
    def diag(self):
        """Absolute values of the diagonal of ``R`` (nonincreasing)."""
        return np.abs(np.diag(self.R))


@dataclass(frozen=True)
class OrderedGeneralizedSchur:
    """Complex generalized Schur form ``A = Q S Z*``, ``B = Q T Z*``.

    The first ``selected`` diagonal pairs of ``(S, T)`` carry the
    eigenvalues accepted by the selection predicate.
    """

    Q: np.ndarray
    Z: np.ndarray
    S: np.ndarray
    T: np.ndarray
    selected: int

    @property
    def eigenvalues(self):
        return _ratio(np.diag(self.S), np.diag(self.T))


def _ratio(alpha, beta):
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    lam = np.full(alpha.shape, complex(np.inf, 0.0))
    nz = beta != 0
    lam[nz] = alpha[nz] / beta[nz]
    return lam


def qr(A):
    """Full QR factorization ``A = Q R`` with ``Q`` unitary."""
    Q, R = sla.qr(np.asarray(A), mode="full")
    return Q, R


def rrqr(A, tol=None):
    """Rank-revealing (column-pivoted) QR factorization.

    Parameters
    ----------
    A : (m, k) array_like
    tol : float, optional
        Relative threshold: the rank is the number of ``|R[i, i]|``
        exceeding ``tol * |R[0, 0]|``. Defaults to ``max(m, k) * u``.

    Returns
    -------
    RankRevealingQR
    """
    A = np.asarray(A)
    if tol is None:
        tol = max(A.shape) * UNIT_ROUNDOFF
    if tol <= 0:
        raise ValueError("tol must be positive")
    Q, R, perm = sla.qr(A, mode="full", pivoting=True)
    d = np.abs(np.diag(R))
    if d.size == 0 or d[0] == 0:
        rank = 0
    else:
        rank = int(np.count_nonzero(d > tol * d[0]))
    return RankRevealingQR(Q, R, perm, rank, tol)


def ordered_gen_schur(A, B, select=None, tol=None):
    """Ordered complex QZ decomposition of the pencil ``A - lambda B``.

    Parameters
    ----------
    A, B : (m, m) array_like
    select : callable, optional
        Predicate on a single eigenvalue (complex, ``inf`` for infinite
        eigenvalues). Selected eigenvalues are moved to the leading block.
        ``None`` selects nothing and keeps the natural QZ order.
    tol : float, optional
        Regularity tolerance, default ``m * u * max(||A||, ||B||)``.

    Raises
    ------
    SingularPencil
        If some diagonal pair ``(S[i, i], T[i, i])`` vanishes to tolerance.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    m = A.shape[0]
    if tol is None:
        scale = max(np.linalg.norm(A, 1), np.linalg.norm(B, 1), 1e-300)
        tol = m * UNIT_ROUNDOFF * scale

    if select is None:
        S, T, Q, Z = sla.qz(A, B, output="complex")
        nsel = 0
    else:
        def sort(alpha, beta):
            return np.array([bool(select(l)) for l in _ratio(alpha, beta)],
                            dtype=bool)
        S, T, _, _, Q, Z = sla.ordqz(A, B, sort=sort, output="complex")
        nsel = int(np.count_nonzero(
            [select(l) for l in _ratio(np.diag(S), np.diag(T))]))
    dS, dT = np.abs(np.diag(S)), np.abs(np.diag(T))
    if np.any((dS <= tol) & (dT <= tol)):
        raise SingularPencil("pencil is numerically singular")
    return OrderedGeneralizedSchur(Q, Z, S, T, nsel)


def gen_eigvals(A, B, tol=None):
    """Generalized eigenvalues of ``A - lambda B`` (``inf`` allowed)."""
    return ordered_gen_schur(A, B, None, tol).eigenvalues


def lu_solver(A, rcond_min=None):
    """Factor ``A`` once and return a function solving ``A X = B``.

    Raises
    ------
    NumericallySingular
        If the LAPACK 1-norm reciprocal condition estimate is below
        ``rcond_min`` (default: unit roundoff).
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if rcond_min is None:
        rcond_min = UNIT_ROUNDOFF
    if A.shape[0] == 0:
        return lambda B: np.asarray(B).copy()
    if not np.all(np.isfinite(A)):
        raise NumericallySingular("matrix has non-finite entries")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(A, check_finite=False)
    anorm = np.linalg.norm(A, 1)
    gecon, = sla.get_lapack_funcs(("gecon",), (lu,))
    rcond, info = gecon(lu, anorm, norm="1")
    if anorm == 0 or not rcond > rcond_min:
        raise NumericallySingular(f"reciprocal condition {rcond:.3e} too small")

    def solve(B):
        return sla.lu_solve((lu, piv), B, check_finite=False)

    solve.rcond = float(rcond)
    return solve


def solve_linear(A, B, rcond_min=None):
    """Solve ``A X = B`` by LU with a conditioning checkpoint.

    Inverses are never formed explicitly anywhere in the package; every
    ``inv(.) @ .`` of the underlying formulas goes through this function.

    Examples
    --------
    >>> import numpy as np
    >>> solve_linear(2 * np.eye(2), np.eye(2))
    array([[0.5, 0. ],
           [0. , 0.5]])
    """
    return lu_solver(A, rcond_min)(np.asarray(B))
