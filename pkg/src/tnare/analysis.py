"""Checkers for absence of unit-circle eigenvalues and existence of solutions.

Grid-based checks sample finitely many points and so can only report
``inconclusive-positive``; ``holds`` is reserved for verdicts that follow
from finitely many exact tests.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import SingularPencil
from .pencil import build_M, is_noncritical, pencil_spectrum

__all__ = [
    "ConditionReport", "HOLDS", "FAILS", "INCONCLUSIVE", "INCONCLUSIVE_POSITIVE",
    "check_critical_cond1", "check_critical_grid", "check_existence_sufficient",
    "check_existence_necessary", "check_all", "format_reports", "DEFAULT_TOL",
    "DEFAULT_GRID",
]

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"
INCONCLUSIVE_POSITIVE = "inconclusive-positive"

DEFAULT_TOL = 1e-10
DEFAULT_GRID = 64
#: radii of the annulus sampled by :func:`check_existence_necessary`
ANNULUS_RADII = (0.5, 2 ** -0.5, 1.0, 2 ** 0.5, 2.0)
#: sample points closer than this to the excluded set are skipped
EXCLUSION_RADIUS = 1e-3


@dataclass
class ConditionReport:
    """Outcome of one condition check.

    Attributes
    ----------
    condition : str
        ``crit-1``, ``crit-2``, ``crit-3``, ``exist-sufficient`` or
        ``exist-necessary``.
    verdict : str
        ``holds``, ``fails``, ``inconclusive`` or ``inconclusive-positive``.
    witness : object
        Evidence for the verdict; always present when it is ``fails``.
    grid : int
        Number of sample points (0 for exact checks).
    detail : dict
        Auxiliary diagnostics.
    """

    condition: str
    verdict: str
    witness: object = None
    grid: int = 0
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict == FAILS and self.witness is None:
            raise ValueError("a failing verdict needs a witness")


def _sym_gap(S):
    nrm = np.linalg.norm(S, 2)
    return float(np.linalg.norm(S - S.T, 2) / nrm) if nrm > 0 else 0.0


def _min_eig(S):
    """Smallest eigenvalue of the symmetric part and its eigenvector."""
    w, V = np.linalg.eigh((S + S.T) / 2)
    return float(w[0]), V[:, 0]


def check_critical_cond1(p, tol=DEFAULT_TOL):
    """``C, B`` symmetric positive definite and ``D - A^T`` of full rank.

    On ``holds`` the pencil is also checked with :func:`is_noncritical`;
    disagreement raises ``AssertionError`` since it would contradict the
    underlying theorem.
    """
    A, B, C, D = p.A, p.B, p.C, p.D
    detail = {}
    for name, S in (("C", C), ("B", B)):
        gap = _sym_gap(S)
        detail[f"sym_gap_{name}"] = gap
        if gap > tol:
            return ConditionReport("crit-1", FAILS, gap, 0, detail)
        lam, v = _min_eig(S)
        detail[f"min_eig_{name}"] = lam
        if not lam > tol:
            detail["reason"] = f"{name} not positive definite"
            return ConditionReport("crit-1", FAILS, v, 0, detail)
    E = D - A.T
    _, s, Vh = np.linalg.svd(E)
    nrm = s[0]
    detail["smin_D_minus_AT"] = float(s[-1])
    if not (nrm > 0 and s[-1] > tol * nrm):
        detail["reason"] = "D - A^T rank deficient"
        return ConditionReport("crit-1", FAILS, Vh[-1].conj(), 0, detail)
    rep = is_noncritical(build_M(p))
    detail["noncritical"] = rep
    assert rep.verdict, "condition 1 holds but the pencil looks critical"
    return ConditionReport("crit-1", HOLDS, None, 0, detail)


def _circle(grid):
    return np.exp(2j * np.pi * np.arange(grid) / grid)


def _min_sv_left(mats):
    """Smallest singular value and left singular vector of each n x 2n matrix."""
    U, s, _ = np.linalg.svd(mats, full_matrices=False)
    return s[:, -1], U[:, :, -1]


def check_critical_grid(p, variant, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """Rank test of the case-2 or case-3 matrix on ``grid`` points of T.

    Variant 2 uses ``[y^-1 C + y C^T, y^-1 D + y A^T]``; variant 3 uses
    ``[y^-1 A + y D^T, -y^-1 B - y B^T]``. Both also require ``B`` and
    ``C`` symmetric positive semidefinite; otherwise the verdict is
    ``inconclusive``. A rank drop at a sample yields ``fails`` with
    witness ``(y, u)``, ``u`` the left null vector.
    """
    if variant not in (2, 3):
        raise ValueError("variant must be 2 or 3")
    if grid < 16:
        raise ValueError("grid must be at least 16")
    A, B, C, D = p.A, p.B, p.C, p.D
    tag = f"crit-{variant}"
    detail = {}
    for name, S in (("C", C), ("B", B)):
        gap = _sym_gap(S)
        lam, _ = _min_eig(S)
        detail[f"sym_gap_{name}"] = gap
        detail[f"min_eig_{name}"] = lam
        if gap > tol or lam < -tol:
            detail["reason"] = f"{name} not symmetric positive semidefinite"
            return ConditionReport(tag, INCONCLUSIVE, lam, grid, detail)
    y = _circle(grid)[:, None, None]
    if variant == 2:
        L, R = (C, C.T), (D, A.T)
    else:
        L, R = (A, D.T), (-B, -B.T)
    mats = np.concatenate([y.conj() * L[0] + y * L[1],
                           y.conj() * R[0] + y * R[1]], axis=2)
    scale = 2 * (np.linalg.norm(L[0], 2) + np.linalg.norm(R[0], 2))
    scale = scale if scale > 0 else 1.0
    smin, u = _min_sv_left(mats)
    detail.update(scale=scale, min_sv=smin)
    try:
        detail["noncritical"] = is_noncritical(build_M(p))
    except SingularPencil:
        detail["noncritical"] = None
    j = int(np.argmin(smin))
    if smin[j] <= tol * scale:
        return ConditionReport(tag, FAILS, (complex(y[j, 0, 0]), u[j]), grid, detail)
    return ConditionReport(tag, INCONCLUSIVE_POSITIVE, None, grid, detail)


def check_existence_sufficient(p, tol=DEFAULT_TOL):
    """``B + B^T`` positive definite; otherwise ``inconclusive``.

    The witness is the smallest eigenvalue of ``(B + B^T) / 2``.
    """
    lam, _ = _min_eig(p.B)
    verdict = HOLDS if lam > tol else INCONCLUSIVE
    return ConditionReport("exist-sufficient", verdict, lam, 0, {"min_eig": lam})


def check_existence_necessary(p, S=None, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """Rank of ``[A + z D^T, -B - z B^T]`` on an annulus avoiding ``S``.

    Parameters
    ----------
    S : array_like, optional
        Eigenvalues of the selected set; defaults to the eigenvalues of the
        pencil inside the unit disk.
    grid : int
        Angular samples per radius, at least 16; ``z = -1`` is always added.

    A rank drop yields ``fails`` with witness ``(z, u)``, where ``u`` is the
    left null vector; then no basis for ``S`` has an invertible top block.
    """
    if grid < 16:
        raise ValueError("grid must be at least 16")
    A, B, D = p.A, p.B, p.D
    if S is None:
        lam = pencil_spectrum(build_M(p))
        S = lam[np.abs(lam) < 1]
    S = np.atleast_1d(np.asarray(S, dtype=complex))
    z = np.concatenate([r * _circle(grid) for r in ANNULUS_RADII] + [[-1.0]])
    if S.size:
        keep = np.min(np.abs(z[:, None] - S[None, :]), axis=1) > EXCLUSION_RADIUS
        z = z[keep]
    zz = z[:, None, None]
    mats = np.concatenate([A + zz * D.T, -B - zz * B.T], axis=2)
    base = max(np.linalg.norm(A, 2), np.linalg.norm(D, 2), np.linalg.norm(B, 2))
    base = base if base > 0 else 1.0
    scale = base * (1 + np.abs(z))
    smin, u = _min_sv_left(mats)
    detail = {"samples": int(z.size), "min_sv": smin, "scale": scale}
    ratio = smin / scale
    j = int(np.argmin(ratio))
    if ratio[j] <= tol:
        return ConditionReport("exist-necessary", FAILS, (complex(z[j]), u[j]),
                               grid, detail)
    return ConditionReport("exist-necessary", INCONCLUSIVE_POSITIVE, None, grid, detail)


def check_all(p, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """All five checks in a fixed order."""
    return [check_critical_cond1(p, tol),
            check_critical_grid(p, 2, grid, tol),
            check_critical_grid(p, 3, grid, tol),
            check_existence_sufficient(p, tol),
            check_existence_necessary(p, None, grid, tol)]


def _fmt_witness(w):
    if w is None:
        return "-"
    if isinstance(w, tuple):
        return f"z={w[0]:.4g}"
    if np.ndim(w) == 0:
        return f"{float(np.real(w)):.4g}"
    return f"vector[{np.size(w)}]"


def format_reports(reports):
    """Aligned plain-text table of condition reports."""
    rows = [("condition", "verdict", "grid", "witness")]
    rows += [(r.condition, r.verdict, str(r.grid), _fmt_witness(r.witness))
             for r in reports]
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip()
                     for r in rows)
