"""Antitriangular forms of T-palindromic pencils and the palindromic QZ solver.

A 2n x 2n matrix ``N`` is antitriangular when ``N[i, j] = 0`` for
``i + j < 2n - 1`` (0-based). For the pencil ``N + z N^T`` the column
``c`` carries the eigenvalue reading ``-N[c*, c] / N[c, c*]`` with
``c* = 2n - 1 - c``, and the readings of ``c`` and ``c*`` are reciprocal.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import _swapkernels as _k
from .errors import (CriticalEigenvalue, ReciprocalSpectrum, SharedSpectrum,
                     SelectionNotReciprocalFree, NumericallySingular)
from .kernels import UNIT_ROUNDOFF, ordered_gen_schur, solve_linear
from .pencil import (PalindromicPencil, build_M, pencil_spectrum,
                     solution_from_basis)

__all__ = [
    "AntitriangularForm", "SwapPlan", "t_sylvester_solve",
    "coupled_sylvester_solve", "block_antitriangularize",
    "reorder_antitriangular", "swap_central", "swap_double",
    "antidiagonal_readings", "stable_first", "antitriangular_mask",
    "palqz_solve", "qz_solve", "stable_basis", "refine_isotropic",
]

#: relative threshold for deciding that a reading sits on the unit circle
CRITICAL_TOL = 1e-12


def antitriangular_mask(N2):
    """Boolean mask of the entries forced to zero (``i + j < N2 - 1``)."""
    i, j = np.indices((N2, N2))
    return i + j < N2 - 1


def antidiagonal_readings(N):
    """Eigenvalues ``-N[c*, c] / N[c, c*]`` for ``c = 0, ..., 2n - 1``."""
    N = np.asarray(N)
    c = np.arange(N.shape[0])
    cs = c[::-1]
    num = N[cs, c].astype(complex)
    den = N[c, cs].astype(complex)
    out = np.full(c.shape, complex(np.inf, 0.0))
    nz = den != 0
    out[nz] = -num[nz] / den[nz]
    return out


def stable_first(N):
    """True iff the first n readings have modulus < 1."""
    N2 = N.shape[0]
    c = np.arange(N2 // 2)
    return bool(np.all(np.abs(N[N2 - 1 - c, c]) < np.abs(N[c, N2 - 1 - c])))


@dataclass
class AntitriangularForm:
    """``U^T M U = N`` with ``U`` unitary and ``N`` antitriangular.

    ``swaps`` counts the swaps applied since the form was built.
    """

    U: np.ndarray
    N: np.ndarray
    swaps: int = 0

    @property
    def n(self):
        return self.N.shape[0] // 2

    def readings(self):
        return antidiagonal_readings(self.N)

    def congruence_error(self, M):
        """``||U^T M U - N||_2``."""
        return float(np.linalg.norm(self.U.T @ M @ self.U - self.N, 2))

    def unitarity_error(self):
        return float(np.linalg.norm(self.U.conj().T @ self.U
                                    - np.eye(self.U.shape[0]), 2))

    def is_antitriangular(self, tol=0.0):
        return bool(np.all(np.abs(self.N[antitriangular_mask(self.N.shape[0])])
                           <= tol))

    def is_regular(self, tol=None):
        """No antidiagonal pair ``(N[c, c*], N[c*, c])`` is jointly negligible."""
        N = self.N
        if tol is None:
            tol = N.shape[0] * UNIT_ROUNDOFF * max(np.linalg.norm(N, 1), 1e-300)
        c = np.arange(N.shape[0])
        a = np.abs(N[c, c[::-1]])
        return bool(np.all(np.maximum(a, a[::-1]) > tol))

    def copy(self):
        return AntitriangularForm(self.U.copy(), self.N.copy(), self.swaps)


@dataclass(frozen=True)
class SwapPlan:
    """Record of one applied swap: position, kind and 2x2 rotors."""

    position: int
    kind: str
    rotors: tuple


def _working(F):
    # the kernels update U through the rows of its transpose
    R = np.array(F.N, dtype=complex, order="C")
    UT = np.array(F.U.T, dtype=complex, order="C")
    return R, UT


# -- linear matrix equations -------------------------------------------------

def t_sylvester_solve(R21, R12, R22):
    """Solve ``R21 Y + Y^T R12 = -R22``.

    A generalized Schur form of ``(R21, R12^T)`` reduces the equation to
    a triangular one, solved by substitution over index pairs in
    ``O(m^3)`` operations.

    Raises
    ------
    ReciprocalSpectrum
        If the pencil ``R21 + z R12^T`` has eigenvalues ``z_i z_j = 1``
        (``i != j``) or ``z_i = 1``, i.e. the solution is not unique.
    """
    R21, R12, R22 = (np.atleast_2d(np.asarray(x)) for x in (R21, R12, R22))
    m = R21.shape[0]
    real = not any(np.iscomplexobj(x) for x in (R21, R12, R22))
    try:
        S, T, Q, Z = sla.qz(R21, R12.T, output="complex")
    except (ValueError, np.linalg.LinAlgError) as exc:
        raise ReciprocalSpectrum(str(exc)) from exc
    rhs = -(Q.conj().T @ R22 @ Q.conj())
    W, ok = _k.tsyl_triangular(np.ascontiguousarray(S), np.ascontiguousarray(T),
                               np.ascontiguousarray(rhs, dtype=complex),
                               4 * m * UNIT_ROUNDOFF)
    if not ok:
        raise ReciprocalSpectrum("T-Sylvester operator is singular")
    Y = Z @ W @ Q.T
    return Y.real.copy() if real else Y


def coupled_sylvester_solve(R12, R21, R22, S12, S21, S22):
    """Solve ``X R12 + R21 Y = -R22`` and ``X S12 + S21 Y = -S22``.

    Dense Kronecker formulation, intended for small blocks.

    Raises
    ------
    SharedSpectrum
        If the pencils ``R12 - l S12`` and ``R21 - l S21`` share an
        eigenvalue (the stacked operator is singular).
    """
    mats = [np.atleast_2d(np.asarray(x)) for x in (R12, R21, R22, S12, S21, S22)]
    R12, R21, R22, S12, S21, S22 = mats
    p, q = R22.shape
    Ip, Iq = np.eye(p), np.eye(q)
    # column-major vec: vec(X K) = (K^T kron I) vec X, vec(L Y) = (I kron L) vec Y
    op = np.block([[np.kron(R12.T, Ip), np.kron(Iq, R21)],
                   [np.kron(S12.T, Ip), np.kron(Iq, S21)]])
    rhs = -np.concatenate([R22.reshape(-1, order="F"), S22.reshape(-1, order="F")])
    try:
        sol = solve_linear(op, rhs, rcond_min=op.shape[0] * UNIT_ROUNDOFF)
    except NumericallySingular as exc:
        raise SharedSpectrum("pencils share an eigenvalue") from exc
    X = sol[: p * R12.shape[0]].reshape(p, R12.shape[0], order="F")
    Y = sol[p * R12.shape[0]:].reshape(R21.shape[1], q, order="F")
    return X, Y


# -- reduction ---------------------------------------------------------------

def _unit_disk(lam):
    return abs(lam) < 1


def stable_basis(P, select=None):
    """Unitary ``U`` whose first n columns span the selected deflating subspace.

    Raises
    ------
    CriticalEigenvalue
        Default selection only: an eigenvalue lies on the unit circle.
    SelectionNotReciprocalFree
        The selection does not pick n eigenvalues free of reciprocal pairs.
    """
    M = P.M
    n = P.n
    lam = pencil_spectrum(P)
    if select is None:
        if np.min(np.abs(np.abs(lam) - 1.0)) <= CRITICAL_TOL:
            raise CriticalEigenvalue("pencil has an eigenvalue on the unit circle")
        select = _unit_disk
    chosen = np.array([bool(select(l)) for l in lam])
    sel = lam[chosen]
    if sel.size != n:
        raise SelectionNotReciprocalFree(f"selected {sel.size} eigenvalues, need {n}")
    with np.errstate(invalid="ignore", divide="ignore"):
        prod = sel[:, None] * sel[None, :]
        fin = np.isfinite(prod)
        bad = fin & (np.abs(prod - 1) <= 1e2 * UNIT_ROUNDOFF * (1 + np.abs(prod)))
        zero_inf = ((sel[:, None] == 0) & np.isinf(sel[None, :]))
    if bad.any() or zero_inf.any():
        raise SelectionNotReciprocalFree("selection contains a reciprocal pair")
    gs = ordered_gen_schur(-M, M.T, select)
    if gs.selected != n:
        raise SelectionNotReciprocalFree(
            f"reordered Schur form selected {gs.selected} eigenvalues, need {n}")
    return gs.Z


def refine_isotropic(M, U, steps=3):
    """Newton refinement of the isotropy of ``span U[:, :n]``.

    Each step solves ``N12 E + E^T N21 = -N11`` for ``N = U^T M U`` and
    replaces the leading columns by an orthonormal basis of
    ``U1 + U2 E``; the residual ``N11`` then drops quadratically.
    Returns the refined ``U`` and the final ``||N11||_2``.
    """
    n = U.shape[0] // 2
    N = U.T @ M @ U
    best = np.linalg.norm(N[:n, :n], 2)
    floor = 4 * n * UNIT_ROUNDOFF * np.linalg.norm(M, 2)
    for _ in range(steps):
        if best <= floor:
            break
        try:
            E = t_sylvester_solve(N[:n, n:], N[n:, :n], N[:n, :n])
        except ReciprocalSpectrum:
            break
        Q, _ = sla.qr(U[:, :n] + U[:, n:] @ E, mode="full")
        Nq = Q.T @ M @ Q
        d = np.linalg.norm(Nq[:n, :n], 2)
        if not d < best:
            break
        U, N, best = Q, Nq, d
    return U, float(best)


def block_antitriangularize(P, select=None, refine_steps=3):
    """Unitary T-congruence taking ``M`` to antitriangular form.

    The first n columns of ``U`` span the deflating subspace of the
    selected eigenvalues (default: the open unit disk), so the leading
    n antidiagonal readings are exactly those eigenvalues.

    Steps: ordered QZ of ``(-M, M^T)``; isotropy refinement of the
    leading block; one QZ of ``(N21, N12^T)`` that triangularizes both
    off-diagonal blocks after a flip.

    ``info`` diagnostics (defects removed when zeroing) are attached to
    the returned form as the attribute ``defects``.
    """
    if not isinstance(P, PalindromicPencil):
        P = PalindromicPencil(np.asarray(P))
    M = P.M
    n = P.n
    U = stable_basis(P, select)
    U, d11 = refine_isotropic(M, U, refine_steps) if refine_steps else (U, np.nan)
    N = U.T @ M @ U
    S, T, Qt, Zt = sla.qz(N[n:, :n], N[:n, n:].T, output="complex")
    F = np.eye(n)[::-1]
    V = sla.block_diag(Zt, Qt.conj() @ F)
    U = U @ V
    N = U.T @ M @ U
    mask = antitriangular_mask(2 * n)
    dropped = float(np.max(np.abs(N[mask]), initial=0.0))
    N[mask] = 0.0
    form = AntitriangularForm(U, N, 0)
    form.defects = {"isotropy": d11, "dropped": dropped}
    return form


# -- swaps -------------------------------------------------------------------

def _swap_tol(R):
    return 8 * UNIT_ROUNDOFF


def swap_central(F):
    """Exchange the two readings adjacent to the antidiagonal centre.

    Only rows and columns ``n - 1, n`` of ``N`` and columns ``n - 1, n``
    of ``U`` change.

    Returns
    -------
    (AntitriangularForm, SwapPlan)

    Raises
    ------
    CriticalEigenvalue
        If ``N[n-1, n] + N[n, n-1]`` vanishes (reading equal to 1).
    """
    R, UT = _working(F)
    n = R.shape[0] // 2
    den = R[n - 1, n] + R[n, n - 1]
    y = -R[n, n] / den if den != 0 else 0.0
    if _k.central_swap(R, UT, _swap_tol(R)) != _k.OK:
        raise CriticalEigenvalue("central swap denominator vanishes")
    plan = SwapPlan(n - 1, "central", (_rotor_matrix(y),))
    return AntitriangularForm(UT.T, R, F.swaps + 1), plan


def swap_double(F, p):
    """Exchange readings ``p, p + 1`` and their mirrored partners.

    Requires ``p + 1 <= n - 1``. Only rows/columns
    ``{p, p + 1, 2n - 2 - p, 2n - 1 - p}`` change.

    Raises
    ------
    SharedSpectrum
        If the two readings coincide.
    """
    R, UT = _working(F)
    N2 = R.shape[0]
    n = N2 // 2
    if not 0 <= p < n - 1:
        raise ValueError(f"double swap needs 0 <= p < n - 1, got p={p}, n={n}")
    ps, qs = N2 - 1 - p, N2 - 2 - p
    sysm = np.array([[R[p, ps], R[p + 1, qs]], [R[ps, p], R[qs, p + 1]]])
    rhs = -np.array([R[p + 1, ps], R[ps, p + 1]])
    if _k.double_swap(R, UT, p, _swap_tol(R)) != _k.OK:
        raise SharedSpectrum("adjacent readings coincide")
    x, y = np.linalg.solve(sysm, rhs)
    plan = SwapPlan(p, "double", (_rotor_matrix(x), _rotor_matrix(y)))
    return AntitriangularForm(UT.T, R, F.swaps + 1), plan


def _rotor_matrix(y):
    a, b, d = _k.rotor(complex(y))
    return np.array([[a, b], [b, d]])


def reorder_antitriangular(F, max_swaps=None):
    """Reorder so that the first n readings lie inside the unit disk.

    Scans for the leftmost position holding an unstable reading
    followed by a stable one (double swap) or an unstable reading next
    to the centre (central swap), applies the swap and resumes one
    position to the left. ``O(n^2)`` swaps of ``O(n)`` cost each.

    Raises
    ------
    CriticalEigenvalue
        If a reading sits on the unit circle or a swap system is singular.
    """
    R, UT = _working(F)
    n = R.shape[0] // 2
    if max_swaps is None:
        max_swaps = 2 * n * n + 16
    status, swaps = _k.reorder(R, UT, _swap_tol(R), CRITICAL_TOL, max_swaps)
    if status == _k.CRITICAL:
        raise CriticalEigenvalue("antidiagonal reading on the unit circle")
    if status != _k.OK:
        raise CriticalEigenvalue(f"swap failed (status {status}) after {swaps} swaps")
    out = AntitriangularForm(UT.T, R, F.swaps + swaps)
    if hasattr(F, "defects"):
        out.defects = F.defects
    return out


# -- solvers -----------------------------------------------------------------

def palqz_solve(p, select=None, refine_steps=3):
    """Solve a T-NARE through a structured antitriangular form.

    The pencil is brought to antitriangular form by unitary
    T-congruence, reordered so that the first n readings are the target
    eigenvalues, and ``X = Q2 Q1^{-1}`` is read from the first n
    columns of the accumulated congruence.

    Parameters
    ----------
    p : TNareProblem
    select : callable, optional
        Eigenvalue predicate used for the initial reduction. Any
        reciprocal-free choice of n eigenvalues works: the reordering
        always moves the stable ones to the front afterwards.
    refine_steps : int
        Isotropy refinement steps (0 disables).
    """
    P = build_M(p)
    F = block_antitriangularize(P, select, refine_steps)
    G = reorder_antitriangular(F)
    info = {"swaps": G.swaps, **F.defects,
            "congruence_error": G.congruence_error(P.M) / np.linalg.norm(P.M, 2)}
    return solution_from_basis(p, G.U[:, :p.n], "palqz", 0, info)


def qz_solve(p):
    """Solve via the stable deflating subspace from ordered QZ."""
    P = build_M(p)
    U = stable_basis(P)
    return solution_from_basis(p, U[:, :p.n], "qz", 0)
