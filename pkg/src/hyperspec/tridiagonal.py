"""Symmetric eigensolver: Householder tridiagonalization plus implicit-shift QL.

Deterministic and dependency-free apart from numpy array arithmetic. Used by
:func:`hyperspec.spectra.eig` by default; LAPACK is available there as an
alternative backend.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionMismatch, NumericalFailure

MAX_SWEEPS_PER_EIGENVALUE = 60


def householder_tridiagonalize(a: np.ndarray, want_vectors: bool = True):
    """Reduce symmetric ``a`` to tridiagonal form ``T = Q^T a Q``.

    Returns
    -------
    diag : ndarray, shape (n,)
    offdiag : ndarray, shape (n,)
        ``offdiag[i] = T[i+1, i]``; the last entry is 0.
    q : ndarray or None
        Orthogonal ``Q`` when ``want_vectors``.
    """
    A = np.array(a, dtype=float, copy=True)
    n = A.shape[0]
    Q = np.eye(n) if want_vectors else None
    for k in range(n - 2):
        x = A[k + 1 :, k]
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        norm = math.hypot(x[0], tail)
        alpha = -norm if x[0] >= 0 else norm
        v = x.copy()
        v[0] -= alpha
        v /= np.linalg.norm(v)
        # reflect rows k+1.. then columns k+1.. (H = I - 2 v v^T)
        A[k + 1 :, k:] -= 2.0 * np.outer(v, v @ A[k + 1 :, k:])
        A[k:, k + 1 :] -= 2.0 * np.outer(A[k:, k + 1 :] @ v, v)
        if Q is not None:
            Q[:, k + 1 :] -= 2.0 * np.outer(Q[:, k + 1 :] @ v, v)
    diag = np.diag(A).copy()
    offdiag = np.zeros(n)
    if n > 1:
        offdiag[:-1] = np.diag(A, -1)
    return diag, offdiag, Q


def tridiagonal_ql(diag, offdiag, vectors_t: np.ndarray | None = None):
    """Implicit-shift QL iteration on a symmetric tridiagonal matrix.

    ``vectors_t`` holds the transposed basis (one basis vector per row) and
    is rotated in place, so on return row ``j`` is the eigenvector belonging
    to ``d[j]``. Eigenvalues come back unsorted.
    """
    d = np.array(diag, dtype=float, copy=True)
    e = np.array(offdiag, dtype=float, copy=True)
    n = d.size
    eps = np.finfo(float).eps
    Zt = vectors_t

    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > MAX_SWEEPS_PER_EIGENVALUE:
                raise NumericalFailure(f"QL iteration did not converge for eigenvalue {l}")

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # split: recover and restart the sweep
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if Zt is not None:
                    upper = Zt[i + 1].copy()
                    Zt[i + 1] = s * Zt[i] + c * upper
                    Zt[i] = c * Zt[i] - s * upper
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, Zt


def symmetric_eigh(a: np.ndarray, want_vectors: bool = True):
    """Eigen-decomposition of a real symmetric matrix.

    Returns ascending eigenvalues and, when requested, a matrix whose columns
    are the corresponding orthonormal eigenvectors.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NumericalFailure("matrix has non-finite entries")
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), (np.zeros((0, 0)) if want_vectors else None)
    diag, offdiag, Q = householder_tridiagonalize(a, want_vectors)
    Zt = Q.T.copy() if want_vectors else None
    d, Zt = tridiagonal_ql(diag, offdiag, Zt)
    order = np.argsort(d, kind="stable")
    values = d[order]
    if not want_vectors:
        return values, None
    return values, Zt[order].T.copy()
