"""Self-contained real-symmetric eigensolver kernels.

Householder tridiagonalisation (vectorised numpy rank-2 updates)
followed by implicit-shift QL on the tridiagonal matrix (eigenvalues
only; numba-compiled when available, with a pure-Python fallback).
"""

from __future__ import annotations

import math

import numpy as np

_EPS = 2.220446049250313e-16


def householder_tridiagonal(a):
    """Tridiagonalise a real symmetric matrix by Householder similarity
    transforms; returns (diagonal, subdiagonal)."""
    A = np.array(a, dtype=float, copy=True)
    n = A.shape[0]
    for k in range(n - 2):
        x = A[k + 1:, k]
        norm = math.sqrt(float(x @ x))
        if norm == 0.0:
            continue
        alpha = -norm if x[0] >= 0 else norm
        v = x.copy()
        v[0] -= alpha
        vsq = float(v @ v)
        if vsq <= 1e-300:
            continue
        beta = 2.0 / vsq
        sub = A[k + 1:, k + 1:]
        p = beta * (sub @ v)
        kk = 0.5 * beta * float(v @ p)
        q = p - kk * v
        sub -= np.outer(q, v) + np.outer(v, q)
        A[k + 1, k] = alpha
        A[k + 2:, k] = 0.0
    d = np.diag(A).copy()
    e = np.zeros(n)
    if n > 1:
        e[: n - 1] = np.diag(A, -1)
    return d, e


def _tql_implicit_py(d, e):
    """Implicit-shift QL iteration on a symmetric tridiagonal matrix.

    ``d`` is the diagonal, ``e`` the subdiagonal padded to the same
    length with a trailing zero; both are overwritten.  Returns 0 on
    success, 1 if any eigenvalue needed more than 50 sweeps.

    Deflation uses a relative test plus an absolute floor at roundoff
    times the matrix norm; without the floor a large cluster of zero
    eigenvalues (rank-deficient Gram matrices) never deflates because
    the neighbouring diagonal entries are themselves zero.
    """
    n = d.shape[0]
    anorm = 0.0
    for i in range(n):
        s = abs(d[i]) + abs(e[i])
        if s > anorm:
            anorm = s
    floor = 0.5 * _EPS * anorm
    for l in range(n):
        its = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd + floor:
                    break
                m += 1
            if m == l:
                break
            its += 1
            if its > 50:
                return 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            sign_r = r if g >= 0 else -r
            g = d[m] - d[l] + e[l] / (g + sign_r)
            s = 1.0
            c = 1.0
            p = 0.0
            clean = True
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    clean = False
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if clean:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return 0


try:
    from numba import njit

    tql_implicit = njit("int64(float64[:], float64[:])", cache=True,
                        nogil=True)(_tql_implicit_py)
except ImportError:  # pragma: no cover - numba is a declared dependency
    tql_implicit = _tql_implicit_py
