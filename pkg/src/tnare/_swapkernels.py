"""Compiled inner loops for antitriangular swaps and T-Sylvester solves.

All routines work in place on C-ordered ``complex128`` arrays. Status
codes instead of exceptions keep them nopython-compatible.
"""

import numba as nb
import numpy as np

OK = 0
CENTRAL_SINGULAR = 1
DOUBLE_SINGULAR = 2
TOO_MANY_SWAPS = 3
CRITICAL = 4


@nb.njit(cache=True)
def rotor(y):
    """Entries ``(a, b, d)`` of ``Q = [[a, b], [b, d]]``, the unitary QR
    factor of ``[[y, 1], [1, 0]]``."""
    r = np.sqrt(y.real * y.real + y.imag * y.imag + 1.0)
    return y / r, 1.0 / r + 0j, -np.conj(y) / r


@nb.njit(cache=True)
def rot_rows(R, i0, i1, a, b, d, start):
    # R[[i0, i1], start:] <- Q^T R[[i0, i1], start:]
    for j in range(start, R.shape[1]):
        x = R[i0, j]
        y = R[i1, j]
        R[i0, j] = a * x + b * y
        R[i1, j] = b * x + d * y


@nb.njit(cache=True)
def rot_cols(R, j0, j1, a, b, d, start):
    # R[start:, [j0, j1]] <- R[start:, [j0, j1]] Q
    for i in range(start, R.shape[0]):
        x = R[i, j0]
        y = R[i, j1]
        R[i, j0] = a * x + b * y
        R[i, j1] = b * x + d * y


@nb.njit(cache=True)
def central_swap(R, UT, tol):
    """Swap the two eigenvalues adjacent to the antidiagonal centre.

    ``UT`` holds the transpose of the accumulated congruence factor.
    """
    n = R.shape[0] // 2
    i0 = n - 1
    i1 = n
    den = R[i0, i1] + R[i1, i0]
    if abs(den) <= tol * (abs(R[i0, i1]) + abs(R[i1, i0])) or den == 0:
        return CENTRAL_SINGULAR
    a, b, d = rotor(-R[i1, i1] / den)
    rot_rows(R, i0, i1, a, b, d, i0)
    rot_cols(R, i0, i1, a, b, d, i0)
    R[i0, i0] = 0.0
    rot_rows(UT, i0, i1, a, b, d, 0)
    return OK


@nb.njit(cache=True)
def double_swap(R, UT, p, tol):
    """Swap eigenvalues at positions ``p, p + 1`` and their mirrors."""
    N2 = R.shape[0]
    ps = N2 - 1 - p
    qs = N2 - 2 - p
    a = R[p, ps]
    b = R[p + 1, qs]
    c = R[p + 1, ps]
    a2 = R[ps, p]
    b2 = R[qs, p + 1]
    c2 = R[ps, p + 1]
    det = a * b2 - b * a2
    if abs(det) <= tol * (abs(a * b2) + abs(b * a2)) or det == 0:
        return DOUBLE_SINGULAR
    x = (b * c2 - c * b2) / det
    y = (c * a2 - a * c2) / det
    a1, b1, d1 = rotor(x)
    ar, br, dr = rotor(y)
    rot_rows(R, p, p + 1, a1, b1, d1, qs)
    rot_cols(R, p, p + 1, a1, b1, d1, qs)
    rot_rows(R, qs, ps, ar, br, dr, p)
    rot_cols(R, qs, ps, ar, br, dr, p)
    R[p, qs] = 0.0
    R[qs, p] = 0.0
    rot_rows(UT, p, p + 1, a1, b1, d1, 0)
    rot_rows(UT, qs, ps, ar, br, dr, 0)
    return OK


@nb.njit(cache=True)
def _unstable(R, c):
    N2 = R.shape[0]
    return abs(R[N2 - 1 - c, c]) > abs(R[c, N2 - 1 - c])


@nb.njit(cache=True)
def reorder(R, UT, tol, crit_tol, max_swaps):
    """Bubble stable antidiagonal readings into the leading half.

    Returns ``(status, swaps)``.
    """
    N2 = R.shape[0]
    n = N2 // 2
    for c in range(n):
        lo = abs(R[N2 - 1 - c, c])
        hi = abs(R[c, N2 - 1 - c])
        if abs(lo - hi) <= crit_tol * max(lo, hi):
            return CRITICAL, 0
    swaps = 0
    m = 0
    while m < n:
        if swaps > max_swaps:
            return TOO_MANY_SWAPS, swaps
        if not _unstable(R, m):
            m += 1
            continue
        if m < n - 1:
            if _unstable(R, m + 1):
                m += 1
                continue
            st = double_swap(R, UT, m, tol)
        else:
            st = central_swap(R, UT, tol)
        if st != OK:
            return st, swaps
        swaps += 1
        m = max(m - 1, 0)
    return OK, swaps


@nb.njit(cache=True)
def tsyl_triangular(A, B, T, tol):
    """Solve ``A W + W^T B^T = T`` for upper-triangular ``A, B``.

    Returns ``(W, ok)``; ``ok`` is False when a pivot vanishes.
    """
    n = A.shape[0]
    W = np.zeros((n, n), dtype=np.complex128)
    for j in range(n - 1, -1, -1):
        for i in range(j, -1, -1):
            r1 = T[i, j]
            for k in range(i + 1, n):
                r1 -= A[i, k] * W[k, j]
            for k in range(j + 1, n):
                r1 -= B[j, k] * W[k, i]
            if i == j:
                piv = A[i, i] + B[i, i]
                if abs(piv) <= tol * (abs(A[i, i]) + abs(B[i, i])) or piv == 0:
                    return W, False
                W[i, i] = r1 / piv
                continue
            r2 = T[j, i]
            for k in range(j + 1, n):
                r2 -= A[j, k] * W[k, i]
            for k in range(i + 1, n):
                r2 -= B[i, k] * W[k, j]
            det = A[i, i] * A[j, j] - B[i, i] * B[j, j]
            scale = abs(A[i, i] * A[j, j]) + abs(B[i, i] * B[j, j])
            if abs(det) <= tol * scale or det == 0:
                return W, False
            W[i, j] = (r1 * A[j, j] - B[j, j] * r2) / det
            W[j, i] = (A[i, i] * r2 - B[i, i] * r1) / det
    return W, True
