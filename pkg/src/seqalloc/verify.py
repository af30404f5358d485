"""Independent verification of allocation optimality claims.

Everything here is checked against the Jacobi eigenvalue oracle and
closed-form bounds, never against the allocator's internal state.
Determinants are always products of oracle eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _jacobi, alloc
from .errors import ConvergenceError
from .linalg import JACOBI_SWEEP_CAP, eigvals_oracle, rank1_add

#: K above which the capacity-region check samples subsets instead of
#: enumerating all of them.
EXHAUSTIVE_LIMIT = 16

_ORACLE_TOL = 1e-12


@dataclass
class RegionCheckReport:
    """Outcome of a capacity-region membership sweep."""

    subsets_checked: int
    worst_slack: float
    violating_subset: tuple | None
    policy: str

    @property
    def passed(self):
        return self.violating_subset is None


@dataclass
class BoundChainReport:
    """Slack of each link in the power/rate inequality chain."""

    p_tot: float
    unit_column_gap: float  # trace P vs trace P S^T S, relative
    cyclic_trace_gap: float  # trace P S^T S vs trace S P S^T, relative
    am_gm_slack: float  # (mean - geomean)/mean of the final eigenvalues
    rate_slack_nats: float | None  # (1/2N) log|A_K| - r_tot, when rates given
    power_slack: float | None  # p_tot - (exp(2 r_tot) - 1), when rates given


@dataclass
class NecessityReport:
    """Demonstration that one sequence too few forfeits optimality.

    Built on the symmetric instance with K = 2N - 1 equal users: any
    assignment with at most 2N - 2 sequences makes two users share,
    and the shared pair forms an oversized compound user. The reported
    completion is the peeling allocator on the compound system; the
    shortfall holds for every completion, so one completion suffices
    to exhibit the gap.
    """

    n_dims: int
    n_users: int
    p_tot: float
    lam_forced: float  # top eigenvalue after the shared pair, 1 + 2Np_tot/K
    lam_cap: float  # GWBE level 1 + p_tot it must stay below
    sum_rate_forced: float
    sum_rate_opt: float
    rate_gap: float
    r_tot: float
    sum_power_forced: float
    sum_power_opt: float
    power_gap: float


def _subset_masks_exhaustive(k):
    idx = np.arange(1, 2**k, dtype=np.int64)
    return ((idx[:, None] >> np.arange(k)) & 1).astype(float)


def _subset_masks_sampled(k, order, seed, n_samples):
    rng = np.random.default_rng(seed)
    rows = [np.eye(k), np.ones((1, k))]
    prefixes = np.zeros((k - 1, k))
    for i in range(k - 1):
        prefixes[i, order[: i + 1]] = 1.0
    rows.append(prefixes)
    sample = rng.integers(0, 2, size=(n_samples, k)).astype(float)
    empty = sample.sum(axis=1) == 0
    if np.any(empty):
        sample[empty, rng.integers(0, k, size=int(np.sum(empty)))] = 1.0
    rows.append(sample)
    return np.vstack(rows)


def region_membership(
    s, p, r, subset_policy="auto", order=None, tol=1e-9, seed=0, n_samples=10000
):
    """Check ``r`` against the capacity region of the pair ``(s, p)``.

    For every tested user subset J the rate sum must stay below the
    log-determinant bound ``(1/2N) log|I + sum_J N p_k s_k s_k^T|``.
    With at most ``EXHAUSTIVE_LIMIT`` users (or ``subset_policy=
    "exhaustive"``) all nonempty subsets are enumerated; otherwise the
    singletons, the full set, the decode-order prefixes, and a seeded
    random sample are used. Violations are reported, not raised.
    """
    s = np.asarray(s, dtype=float)
    p = np.asarray(p, dtype=float)
    r = np.asarray(r, dtype=float)
    n, k = s.shape
    if np.any(p < 0):
        raise ValueError("powers must be non-negative")
    order = alloc._as_order(order, k)

    if subset_policy == "auto":
        subset_policy = "exhaustive" if k <= EXHAUSTIVE_LIMIT else "sampled"
    if subset_policy == "exhaustive":
        masks = _subset_masks_exhaustive(k)
    elif subset_policy == "sampled":
        masks = _subset_masks_sampled(k, order, seed, n_samples)
    else:
        raise ValueError(f"unknown subset policy {subset_policy!r}")

    weights = masks * (n * p)
    logdets, worst_off = _jacobi.batch_logdet_gram(s, weights, _ORACLE_TOL, JACOBI_SWEEP_CAP)
    if worst_off > _ORACLE_TOL:
        raise ConvergenceError(
            "eigenvalue oracle failed to converge during the region sweep",
            residual=worst_off,
        )
    slacks = logdets / (2.0 * n) - masks @ r
    worst_row = int(np.argmin(slacks))
    worst = float(slacks[worst_row])
    violating = None
    if worst < -tol:
        violating = tuple(int(i) for i in np.flatnonzero(masks[worst_row]))
    return RegionCheckReport(
        subsets_checked=masks.shape[0],
        worst_slack=worst,
        violating_subset=violating,
        policy=subset_policy,
    )


def vertex_rates(s, p, order=None):
    """Successive-decoding rates along ``order``: determinant increments.

    ``r_k = (1/2N)(log|A_k| - log|A_{k-1}|)`` with ``A_k`` accumulating
    the first k users of the order. Every increment is non-negative and
    they telescope to ``(1/2N) log|A_K|`` regardless of the order.
    """
    s = np.asarray(s, dtype=float)
    p = np.asarray(p, dtype=float)
    n, k = s.shape
    norms = np.linalg.norm(s, axis=0)
    bad = np.flatnonzero(np.abs(norms - 1.0) > 1e-9)
    if bad.size:
        raise ValueError(f"column(s) {bad.tolist()} are not unit vectors")
    order = alloc._as_order(order, k)
    rates = np.zeros(k)
    a = np.eye(n)
    prev_logdet = 0.0
    for u in order:
        a = rank1_add(a, math.sqrt(n * p[u]) * s[:, u])
        logdet = float(np.sum(np.log(eigvals_oracle(a))))
        rates[u] = (logdet - prev_logdet) / (2.0 * n)
        prev_logdet = logdet
    return rates


def bound_chain(s, p, r=None):
    """Recompute the inequality chain from total power to total rate.

    Links: total power equals ``trace(P S^T S)`` because the columns are
    unit vectors; the cyclic property moves it to ``trace(S P S^T)``;
    the arithmetic mean of the final eigenvalues dominates their
    geometric mean (equality exactly at a scaled-identity, i.e. GWBE,
    endpoint); and when rates are supplied, the region constraint caps
    the rate total by the log-determinant. All slacks are reported
    relative to their own scale.
    """
    s = np.asarray(s, dtype=float)
    p = np.asarray(p, dtype=float)
    n, k = s.shape
    p_tot = float(np.sum(p))
    gram_diag = np.sum(s * s, axis=0)
    trace_psts = float(np.sum(p * gram_diag))
    a = np.eye(n)
    for u in range(k):
        a = rank1_add(a, math.sqrt(n * p[u]) * s[:, u])
    # A = I + N * S P S^T, so trace S P S^T falls out of the trace of A.
    trace_spst = (float(np.trace(a)) - n) / n
    scale = max(abs(p_tot), 1.0)
    values = eigvals_oracle(a)
    am = float(np.mean(values))
    gm = math.exp(float(np.mean(np.log(values))))
    report = BoundChainReport(
        p_tot=p_tot,
        unit_column_gap=abs(p_tot - trace_psts) / scale,
        cyclic_trace_gap=abs(trace_psts - trace_spst) / scale,
        am_gm_slack=(am - gm) / am,
        rate_slack_nats=None,
        power_slack=None,
    )
    if r is not None:
        r_tot = float(np.sum(np.asarray(r, dtype=float)))
        logdet = float(np.sum(np.log(values)))
        report.rate_slack_nats = logdet / (2.0 * n) - r_tot
        report.power_slack = p_tot - math.expm1(2.0 * r_tot)
    return report


def necessity_demo(n_dims, power_each=1.0, rate_each=0.1):
    """Exhibit the optimality gap forced by sharing one sequence.

    Builds the symmetric K = 2N - 1 user instance, merges users 1 and 2
    into a compound user (they share a sequence), and completes the
    allocation with the peeling allocator. The completion's sum rate
    falls strictly short of the unshared optimum, and the mirrored
    rate-demand construction strictly exceeds the minimum power.
    """
    n = int(n_dims)
    if n < 2:
        raise ValueError("the construction needs a processing gain of at least 2")
    k = 2 * n - 1

    # Power-constrained side.
    p_tot = power_each * k
    compound = alloc.ProblemInstance(
        n_dims=n,
        demands=np.concatenate([[2.0 * power_each], np.full(k - 2, power_each)]),
        mode=alloc.MODE_POWERS,
    )
    forced = alloc.allocate_with_oversized(compound)
    sum_rate_forced = float(np.sum(forced.r))
    sum_rate_opt = 0.5 * math.log1p(p_tot)

    # Rate-constrained mirror.
    r_tot = rate_each * k
    compound_r = alloc.ProblemInstance(
        n_dims=n,
        demands=np.concatenate([[2.0 * rate_each], np.full(k - 2, rate_each)]),
        mode=alloc.MODE_RATES,
    )
    forced_r = alloc.allocate_with_oversized(compound_r)
    sum_power_forced = float(np.sum(forced_r.p))
    sum_power_opt = math.expm1(2.0 * r_tot)

    return NecessityReport(
        n_dims=n,
        n_users=k,
        p_tot=p_tot,
        lam_forced=1.0 + 2.0 * n * p_tot / k,
        lam_cap=1.0 + p_tot,
        sum_rate_forced=sum_rate_forced,
        sum_rate_opt=sum_rate_opt,
        rate_gap=sum_rate_opt - sum_rate_forced,
        r_tot=r_tot,
        sum_power_forced=sum_power_forced,
        sum_power_opt=sum_power_opt,
        power_gap=sum_power_forced - sum_power_opt,
    )
