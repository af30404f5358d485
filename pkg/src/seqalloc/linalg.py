"""Dense real-symmetric linear algebra primitives.

Conventions used across the package: vectors are 1-d float arrays,
symmetric matrices are square arrays exactly equal to their transpose,
bases are square arrays with orthonormal columns, and spectra are 1-d
arrays sorted in non-increasing order. All operations treat inputs as
immutable and return fresh arrays, so values can be shared freely
between threads.

The eigensolver here is a cyclic Jacobi iteration. It exists as an
independent oracle: every spectral claim made by the allocation code is
checked against it, and it shares no arithmetic with that code.
"""

from __future__ import annotations

import numpy as np

from . import _jacobi
from .errors import ConvergenceError, DimensionMismatchError

#: Default absolute tolerance for orthonormality checks.
TOL_ORTHO = 1e-10

#: Hard cap on Jacobi sweeps before the oracle gives up.
JACOBI_SWEEP_CAP = 30


def as_vector(c):
    """Validate and return ``c`` as a finite 1-d float array."""
    c = np.asarray(c, dtype=float)
    if c.ndim != 1:
        raise DimensionMismatchError(f"expected a 1-d vector, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("vector entries must be finite")
    return c


def as_sym_matrix(a):
    """Validate and return ``a`` as a finite, exactly symmetric square array."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    if not np.array_equal(a, a.T):
        raise ValueError("matrix must be exactly symmetric")
    return a


def as_spectrum(values):
    """Validate and return eigenvalues sorted non-increasing."""
    values = as_vector(values)
    if np.any(values[:-1] < values[1:]):
        raise ValueError("spectrum must be sorted in non-increasing order")
    return values


def sort_spectrum(values, basis=None):
    """Sort eigenvalues non-increasing, reordering basis columns to match."""
    values = as_vector(values)
    idx = np.argsort(-values, kind="stable")
    if basis is None:
        return values[idx]
    return values[idx], basis[:, idx]


def rank1_add(a, c):
    """Return ``a + c c^T`` as an exactly symmetric matrix.

    The outer product of ``c`` with itself is symmetric bit-for-bit, so
    the sum inherits exact symmetry from ``a``. The trace grows by
    ``||c||^2``.
    """
    a = as_sym_matrix(a)
    c = as_vector(c)
    if c.shape[0] != a.shape[0]:
        raise DimensionMismatchError(
            f"vector of length {c.shape[0]} cannot update a {a.shape[0]}x{a.shape[0]} matrix"
        )
    return a + np.outer(c, c)


def eig_oracle(a, tol=1e-12, max_sweeps=JACOBI_SWEEP_CAP):
    """Eigen-decompose a symmetric matrix by cyclic Jacobi sweeps.

    Parameters
    ----------
    a : (n, n) array
        Exactly symmetric input.
    tol : float
        Relative threshold: sweeps stop once the off-diagonal Frobenius
        norm falls below ``tol`` times the Frobenius norm of ``a``.
    max_sweeps : int
        Sweep cap; exceeding it raises ``ConvergenceError`` carrying the
        final residual.

    Returns
    -------
    (values, basis)
        Eigenvalues sorted non-increasing and the matching orthonormal
        eigenvector columns, so that ``basis @ diag(values) @ basis.T``
        reconstructs ``a`` to within ``tol * ||a||``.
    """
    a = as_sym_matrix(a)
    if tol <= 0:
        raise ValueError("tol must be positive")
    work = a.copy()
    basis = np.eye(a.shape[0])
    sweeps, off, anorm = _jacobi.sweep_full(work, basis, tol, max_sweeps)
    if off > tol * anorm:
        raise ConvergenceError(
            f"Jacobi iteration stalled after {max_sweeps} sweeps "
            f"(off-diagonal residual {off:.3e} vs threshold {tol * anorm:.3e})",
            residual=off,
        )
    return sort_spectrum(np.diag(work).copy(), basis)


def eigvals_oracle(a, tol=1e-12, max_sweeps=JACOBI_SWEEP_CAP):
    """Eigenvalues only, sorted non-increasing; same iteration as eig_oracle."""
    a = as_sym_matrix(a)
    work = a.copy()
    sweeps, off, anorm = _jacobi.sweep_values(work, tol, max_sweeps)
    if off > tol * anorm:
        raise ConvergenceError(
            f"Jacobi iteration stalled after {max_sweeps} sweeps",
            residual=off,
        )
    return sort_spectrum(np.diag(work).copy())


def plane_rotation(u, n, alpha, beta, tol=1e-12):
    """Rotate basis columns ``n`` and ``n + 1`` by the (alpha, beta) pair.

    Columns become ``(alpha*u_n + beta*u_{n+1}, -beta*u_n + alpha*u_{n+1})``;
    every other column is returned bitwise unchanged. ``alpha**2 + beta**2``
    must equal 1 within ``tol``.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 2:
        raise DimensionMismatchError(f"expected a 2-d basis, got shape {u.shape}")
    if not 0 <= n < u.shape[1] - 1:
        raise IndexError(f"rotation plane ({n}, {n + 1}) out of range for {u.shape[1]} columns")
    drift = abs(alpha * alpha + beta * beta - 1.0)
    if drift > tol:
        raise ValueError(f"alpha^2 + beta^2 deviates from 1 by {drift:.3e}")
    out = u.copy()
    un = u[:, n]
    un1 = u[:, n + 1]
    out[:, n] = alpha * un + beta * un1
    out[:, n + 1] = alpha * un1 - beta * un
    return out


def check_orthonormal(u, tol=TOL_ORTHO):
    """Raise if the columns of ``u`` are not orthonormal within ``tol``."""
    u = np.asarray(u, dtype=float)
    gram = u.T @ u
    worst = np.max(np.abs(gram - np.eye(u.shape[1])))
    if worst > tol:
        raise ValueError(f"columns are not orthonormal (worst Gram deviation {worst:.3e})")
    return u
