"""Shared generators for randomized suites."""

import numpy as np
import pytest


def random_orthonormal(rng, n):
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return q


def random_spectrum(rng, n, min_gap=1e-6):
    """Strictly decreasing spectrum with consecutive gaps >= min_gap."""
    gaps = rng.uniform(min_gap, 1.0, n)
    return np.cumsum(gaps)[::-1].copy()


def random_interlacing_target(rng, lam, top_room=2.0):
    """Sample a target interlacing ``lam`` from above, entry by entry."""
    n = lam.shape[0]
    hat = np.empty(n)
    hat[0] = lam[0] + rng.uniform(0.0, top_room)
    for i in range(1, n):
        hat[i] = rng.uniform(lam[i], lam[i - 1])
    return hat


def random_clustered_spectrum(rng, n, lo=0.0, hi=10.0):
    """Spectrum with repeated values, multiplicities up to n // 2."""
    values = []
    while len(values) < n:
        mult = int(rng.integers(1, max(2, n // 2 + 1)))
        mult = min(mult, n - len(values))
        values.extend([float(rng.uniform(lo, hi))] * mult)
    return np.sort(values)[::-1].copy()


def random_snapped_target(rng, lam, top_room=2.0, snap=0.25):
    """Interlacing target that hits bracket endpoints with probability 2*snap."""
    n = lam.shape[0]
    hat = np.empty(n)
    for i in range(n):
        lo = lam[i]
        hi = lam[i - 1] if i > 0 else lam[0] + top_room
        u = rng.random()
        if u < snap:
            hat[i] = lo
        elif u < 2 * snap:
            hat[i] = hi
        else:
            hat[i] = rng.uniform(lo, hi)
    return hat


def random_demands_nonoversized(rng, n, k, lo=0.2, hi=1.0):
    """Positive demands with no user above a 1/n share of the total.

    With k == n only the symmetric vector qualifies; otherwise the draw
    is shrunk toward its mean just enough to clear the threshold.
    """
    if k == n:
        return np.full(k, float(rng.uniform(lo, hi)))
    x = rng.uniform(lo, hi, k)
    mean = x.mean()
    mx = x.max()
    if n * mx > x.sum() and mx > mean:
        theta = 0.95 * (x.sum() / n - mean) / (mx - mean)
        x = mean + (x - mean) * min(1.0, theta)
    return x


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
