"""Cyclic Jacobi kernels for the symmetric eigenvalue oracle.

These kernels are deliberately kept free of any allocator code so that
every verification result is produced on an independent path. They are
written as plain nested loops; numba compiles them when available and
they still run (slowly) without it.
"""

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


@njit(cache=True)
def sweep_full(a, v, tol, max_sweeps):
    """Diagonalize ``a`` in place, accumulating rotations into ``v``.

    Stops once the off-diagonal Frobenius norm drops to ``tol`` times the
    Frobenius norm of the input. Returns (sweeps_used, final_off, anorm).
    """
    n = a.shape[0]
    anorm = 0.0
    for i in range(n):
        for j in range(n):
            anorm += a[i, j] * a[i, j]
    anorm = np.sqrt(anorm)
    thresh = tol * anorm
    sweeps = 0
    while sweeps < max_sweeps:
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        off = np.sqrt(2.0 * off)
        if off <= thresh:
            return sweeps, off, anorm
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = 0.5 * np.arctan2(2.0 * apq, a[q, q] - a[p, p])
                c = np.cos(theta)
                s = np.sin(theta)
                for i in range(n):
                    api = a[p, i]
                    aqi = a[q, i]
                    a[p, i] = c * api - s * aqi
                    a[q, i] = s * api + c * aqi
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * aiq
                    a[i, q] = s * aip + c * aiq
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * viq
                    v[i, q] = s * vip + c * viq
        sweeps += 1
    off = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            off += a[i, j] * a[i, j]
    off = np.sqrt(2.0 * off)
    return sweeps, off, anorm


@njit(cache=True)
def sweep_values(a, tol, max_sweeps):
    """Same iteration as ``sweep_full`` without eigenvector accumulation."""
    n = a.shape[0]
    anorm = 0.0
    for i in range(n):
        for j in range(n):
            anorm += a[i, j] * a[i, j]
    anorm = np.sqrt(anorm)
    thresh = tol * anorm
    sweeps = 0
    while sweeps < max_sweeps:
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += a[i, j] * a[i, j]
        off = np.sqrt(2.0 * off)
        if off <= thresh:
            return sweeps, off, anorm
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = 0.5 * np.arctan2(2.0 * apq, a[q, q] - a[p, p])
                c = np.cos(theta)
                s = np.sin(theta)
                for i in range(n):
                    api = a[p, i]
                    aqi = a[q, i]
                    a[p, i] = c * api - s * aqi
                    a[q, i] = s * api + c * aqi
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = c * aip - s * aiq
                    a[i, q] = s * aip + c * aiq
        sweeps += 1
    off = 0.0
    for i in range(n - 1):
        for j in range(i + 1, n):
            off += a[i, j] * a[i, j]
    off = np.sqrt(2.0 * off)
    return sweeps, off, anorm


@njit(cache=True)
def batch_logdet_gram(s, weights, tol, max_sweeps):
    """log det(I + sum_k w_k s_k s_k^T) for every row of ``weights``.

    ``s`` is (n, k) with unit columns, ``weights`` is (m, k). Determinants
    are taken as products of Jacobi eigenvalues. Returns (logdets,
    worst_off_ratio) where the ratio is the largest residual relative to
    the matrix norm across the batch, for a convergence check upstream.
    """
    n, k = s.shape
    m = weights.shape[0]
    out = np.empty(m)
    worst = 0.0
    a = np.empty((n, n))
    for row in range(m):
        for i in range(n):
            for j in range(n):
                a[i, j] = 0.0
            a[i, i] = 1.0
        for u in range(k):
            w = weights[row, u]
            if w == 0.0:
                continue
            for i in range(n):
                si = w * s[i, u]
                for j in range(n):
                    a[i, j] += si * s[j, u]
        sweeps, off, anorm = sweep_values(a, tol, max_sweeps)
        if anorm > 0.0 and off / anorm > worst:
            worst = off / anorm
        acc = 0.0
        for i in range(n):
            acc += np.log(a[i, i])
        out[row] = acc
    return out, worst
