"""Rank-one additive inverse eigenvalue solver.

Given the spectrum of a real symmetric matrix and a target spectrum
that interlaces it, these routines construct a real vector ``c`` such
that ``A + c c^T`` has exactly the target spectrum. The construction
works on the diagonalized problem: the update weights come from ratios
of characteristic-polynomial gap products, repeated eigenvalues are
removed first by cancelling common factors, and the weights are mapped
back through the eigenbasis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, InterlacingError
from .linalg import as_vector

#: Radicands this far below zero are treated as rounding and clipped;
#: anything lower signals an interlacing/tolerance inconsistency.
RADICAND_CLIP = 1e-12

#: Factor-count threshold above which gap products switch to log-sums.
_LOG_PRODUCT_CUTOFF = 16


def _pair(lam, lam_hat):
    lam = as_vector(lam)
    lam_hat = as_vector(lam_hat)
    if lam.shape != lam_hat.shape:
        raise DimensionMismatchError(
            f"spectra have different lengths: {lam.shape[0]} vs {lam_hat.shape[0]}"
        )
    return lam, lam_hat


def first_violation(lam, lam_hat, tol=0.0):
    """Index of the first failed interlacing inequality, or None.

    The alternating chain ``hat_1 >= lam_1 >= hat_2 >= ... >= lam_n`` is
    checked with slack ``-tol``; position ``i`` refers to its ``i``-th
    inequality (0-based).
    """
    lam, lam_hat = _pair(lam, lam_hat)
    n = lam.shape[0]
    for i in range(n):
        if lam_hat[i] < lam[i] - tol:
            return 2 * i
        if i + 1 < n and lam[i] < lam_hat[i + 1] - tol:
            return 2 * i + 1
    return None


def interlaces(lam, lam_hat, tol=0.0):
    """True iff ``lam_hat`` interlaces ``lam`` from above with slack >= -tol."""
    return first_violation(lam, lam_hat, tol) is None


@dataclass
class ClusterReduction:
    """Strictly separated reduction of an interlacing pair.

    ``surviving_indices[i]`` is the position in the original spectrum
    whose update weight realizes ``reduced_lam[i]``; cancelled positions
    carry weight zero.
    """

    surviving_indices: np.ndarray
    reduced_lam: np.ndarray
    reduced_lam_hat: np.ndarray

    @property
    def order(self):
        return self.reduced_lam.shape[0]


def default_cluster_tol(lam):
    """Relative multiplicity tolerance: 1e-9 scaled by the top eigenvalue."""
    return 1e-9 * max(1.0, abs(float(lam[0])))


def cluster_reduce(lam, lam_hat, tol_cluster=None):
    """Cancel eigenvalues shared between the two spectra.

    Values of ``lam`` within ``tol_cluster`` of each other are treated as
    one repeated eigenvalue; target values matching a cluster cancel
    against it multiplicity-for-multiplicity. What remains is a pair of
    equally long, strictly separated lists whose zeros interlace, plus
    the index each surviving current eigenvalue occupies in the original
    ordering (the first slot of its cluster).
    """
    lam, lam_hat = _pair(lam, lam_hat)
    n = lam.shape[0]
    if n == 0:
        empty = np.empty(0)
        return ClusterReduction(np.empty(0, dtype=int), empty, empty.copy())
    if tol_cluster is None:
        tol_cluster = default_cluster_tol(lam)

    # Cluster the current spectrum by scanning the sorted values.
    starts = [0]
    for i in range(1, n):
        if lam[i - 1] - lam[i] > tol_cluster:
            starts.append(i)
    starts.append(n)
    values = np.array([lam[starts[i]] for i in range(len(starts) - 1)])
    counts = np.array([starts[i + 1] - starts[i] for i in range(len(starts) - 1)])

    # Assign each target value to the nearest cluster, if close enough.
    matched = [[] for _ in values]
    free_targets = []
    for t in lam_hat:
        gaps = np.abs(values - t)
        c = int(np.argmin(gaps))
        if gaps[c] <= tol_cluster:
            matched[c].append(float(t))
        else:
            free_targets.append(float(t))

    surviving = []
    reduced_lam = []
    reduced_hat = list(free_targets)
    for c in range(len(values)):
        cancelled = min(counts[c], len(matched[c]))
        keep_lam = counts[c] - cancelled
        keep_hat = len(matched[c]) - cancelled
        if keep_lam > 1 or keep_hat > 1:
            raise InterlacingError(
                "multiplicity pattern inconsistent with interlacing near "
                f"eigenvalue {values[c]!r}"
            )
        if keep_lam == 1:
            surviving.append(starts[c])
            reduced_lam.append(float(values[c]))
        if keep_hat == 1:
            # Keep the matched target farthest from the cluster value.
            reduced_hat.append(max(matched[c], key=lambda t: abs(t - values[c])))

    if len(reduced_lam) != len(reduced_hat):
        raise InterlacingError(
            "reduction produced spectra of unequal degree "
            f"({len(reduced_lam)} vs {len(reduced_hat)}); interlacing is inconsistent "
            "with the clustering tolerance"
        )
    order = np.argsort(-np.asarray(reduced_lam), kind="stable")
    surviving = np.asarray(surviving, dtype=int)[order]
    reduced_lam = np.asarray(reduced_lam)[order]
    reduced_hat = np.sort(np.asarray(reduced_hat))[::-1]
    return ClusterReduction(surviving, reduced_lam, reduced_hat)


def _radicands(red):
    """-f(lam_i)/g'(lam_i) on the reduced problem, sign included.

    ``f`` has the reduced targets as zeros and ``g`` the reduced current
    values. Under strict interlacing the two polynomials take opposite
    signs at every current eigenvalue, so the ratios are non-negative;
    a materially negative value is reported to the caller unclipped.
    """
    lam = red.reduced_lam
    hat = red.reduced_lam_hat
    m = lam.shape[0]
    out = np.empty(m)
    if m <= _LOG_PRODUCT_CUTOFF:
        for i in range(m):
            f = np.prod(lam[i] - hat)
            g_prime = np.prod(lam[i] - np.delete(lam, i))
            out[i] = -f / g_prime
        return out
    # Long products overflow easily; work with log magnitudes and count
    # negative factors for the sign.
    for i in range(m):
        fg = lam[i] - hat
        gg = lam[i] - np.delete(lam, i)
        sign = (-1.0) ** (int(np.sum(fg < 0)) + int(np.sum(gg < 0)) + 1)
        if np.any(fg == 0.0):
            out[i] = 0.0
            continue
        log_mag = np.sum(np.log(np.abs(fg))) - np.sum(np.log(np.abs(gg)))
        out[i] = sign * math.exp(log_mag)
    return out


def diagonal_update_vector(lam, lam_hat, tol=1e-9, tol_cluster=None):
    """Weights ``y`` with ``sigma(diag(lam) + y y^T)`` equal to ``lam_hat``.

    ``lam_hat`` must interlace ``lam`` (checked with slack ``tol``).
    ``||y||^2`` equals the total spectrum shift, so the trace of the
    updated matrix lands exactly on the target sum.
    """
    lam, lam_hat = _pair(lam, lam_hat)
    bad = first_violation(lam, lam_hat, tol)
    if bad is not None:
        raise InterlacingError(
            f"target spectrum does not interlace (inequality {bad} fails)", index=bad
        )
    red = cluster_reduce(lam, lam_hat, tol_cluster)
    y = np.zeros(lam.shape[0])
    if red.order == 0:
        return y
    radicands = _radicands(red)
    low = np.min(radicands)
    if low < -RADICAND_CLIP:
        raise InterlacingError(
            f"negative radicand {low:.3e} in the update weights; interlacing and "
            "clustering tolerances are inconsistent"
        )
    y[red.surviving_indices] = np.sqrt(np.clip(radicands, 0.0, None))
    return y


def converse_weyl(eigs, lam_hat, tol=1e-9, tol_cluster=None):
    """Update vector ``c`` with ``sigma(A + c c^T) == lam_hat``.

    ``eigs`` is a ``(values, basis)`` pair as returned by
    ``linalg.eig_oracle`` for ``A``; the target must interlace the
    values. The weights are computed on the diagonalized problem and
    rotated back, ``c = basis @ y``.
    """
    values, basis = eigs
    values = as_vector(values)
    basis = np.asarray(basis, dtype=float)
    if basis.shape != (values.shape[0], values.shape[0]):
        raise DimensionMismatchError(
            f"basis shape {basis.shape} does not match spectrum length {values.shape[0]}"
        )
    y = diagonal_update_vector(values, lam_hat, tol=tol, tol_cluster=tol_cluster)
    return basis @ y


def same_direction_update(eigs, l, new_value, tol=0.0):
    """Raise one eigenvalue in place, leaving the eigenbasis untouched.

    With ``u_l`` the eigenvector of the ``l``-th eigenvalue, the update
    ``c = sqrt(new_value - lam_l) * u_l`` moves only that eigenvalue, and
    ``A + c c^T`` is diagonalized by the same basis. ``new_value`` must
    stay within the interlacing bracket ``[lam_l, lam_{l-1}]``.
    """
    values, basis = eigs
    values = as_vector(values)
    if not 0 <= l < values.shape[0]:
        raise IndexError(f"eigenvalue index {l} out of range")
    lam_l = values[l]
    if new_value < lam_l:
        raise ValueError(f"new value {new_value!r} is below the current eigenvalue {lam_l!r}")
    if l > 0 and new_value > values[l - 1] + tol:
        raise InterlacingError(
            f"raising eigenvalue {l} to {new_value!r} passes its upper neighbour "
            f"{values[l - 1]!r}",
            index=2 * l - 1,
        )
    return math.sqrt(new_value - lam_l) * np.asarray(basis, dtype=float)[:, l]
