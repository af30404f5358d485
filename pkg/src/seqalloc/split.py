"""User splitting onto N orthogonal sequences.

A demand vector has a symmetric sum partition of size N when the users
can be grouped into N subsets each carrying exactly 1/N of the total.
Walking the cumulative demand and cutting at every multiple of
``total/N`` manufactures such a partition, splitting at most N-1 users
into two virtual users each (more only if a user is oversized). Each
subset then signals on its own standard basis vector; inside a subset,
successive interference cancellation decodes the highest index first,
and the power assignment telescopes so every subset costs exactly the
same. The result matches the optimum of the general allocator while
using only N sequences that can be fixed up front.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PartitionError

#: Relative tolerance under which a cumulative sum counts as exactly on
#: a subset boundary (the user is then not split).
BOUNDARY_EQ_TOL = 1e-12

#: Parts smaller than this fraction of the total are merged away.
MIN_PART = 1e-15


@dataclass
class SplitRecord:
    user: int
    parts: tuple


@dataclass
class PartitionPlan:
    """A symmetric sum partition over virtual users.

    ``virtual_demands[v]`` belongs to original user ``origin[v]``;
    ``subsets[n]`` lists the virtual users signalling on dimension n,
    in increasing index order.
    """

    n_subsets: int
    demands: np.ndarray
    virtual_demands: np.ndarray
    origin: np.ndarray
    subsets: list
    splits: list

    @property
    def k_prime(self):
        return self.virtual_demands.shape[0]

    @property
    def total(self):
        return float(np.sum(self.demands))


@dataclass
class OrthoAllocation:
    """Per-virtual-user sequence indices and powers for one partition."""

    sequence_index: np.ndarray
    powers: np.ndarray
    decode_order: list


def make_partition(demands, n_subsets):
    """Split users so the demand vector acquires a symmetric sum partition.

    Walks the cumulative demand; whenever a multiple of ``total/N``
    falls strictly inside a user, that user is cut there. Boundaries
    landing on a user's edge (within ``BOUNDARY_EQ_TOL`` relative)
    produce no split, and slivers below ``MIN_PART`` of the total are
    merged into their neighbour. Unsplit users keep their demand value
    verbatim; split parts are differences of the same cumulative sums,
    so each user's parts sum back to its demand.
    """
    demands = np.asarray(demands, dtype=float)
    if demands.ndim != 1 or demands.size == 0:
        raise ValueError("demands must be a nonempty 1-d array")
    if not np.all(np.isfinite(demands)) or np.any(demands <= 0.0):
        raise ValueError("all demands must be positive and finite")
    n = int(n_subsets)
    if n < 1:
        raise ValueError("the partition needs at least one subset")

    k = demands.shape[0]
    total = float(np.sum(demands))
    cum = np.cumsum(demands)
    eq_tol = BOUNDARY_EQ_TOL * total
    min_part = MIN_PART * total

    virtual = []
    origin = []
    subsets = [[] for _ in range(n)]
    splits = []
    subset = 0
    next_boundary = 1  # 1-based index of the next multiple of total/n

    for u in range(k):
        lo = cum[u - 1] if u > 0 else 0.0
        hi = cum[u]
        cut_coords = []
        advance_after = 0
        while next_boundary < n:
            b = next_boundary * total / n
            if b > hi + eq_tol:
                break
            if abs(b - hi) <= eq_tol or hi - b < min_part:
                # Boundary sits on (or a sliver from) this user's end.
                advance_after += 1
            elif abs(b - lo) <= eq_tol or b - lo < min_part:
                # Effectively at the start: open the next subset before
                # this user rather than emitting a zero-size part.
                subset = min(subset + 1, n - 1)
            else:
                cut_coords.append(b)
            next_boundary += 1

        if not cut_coords:
            virtual.append(float(demands[u]))
            origin.append(u)
            subsets[subset].append(len(virtual) - 1)
        else:
            coords = [lo] + cut_coords + [hi]
            parts = [coords[i + 1] - coords[i] for i in range(len(coords) - 1)]
            splits.append(SplitRecord(user=u, parts=tuple(parts)))
            for i, part in enumerate(parts):
                if i > 0:
                    subset = min(subset + 1, n - 1)
                virtual.append(part)
                origin.append(u)
                subsets[subset].append(len(virtual) - 1)
        subset = min(subset + advance_after, n - 1)

    return PartitionPlan(
        n_subsets=n,
        demands=demands,
        virtual_demands=np.asarray(virtual),
        origin=np.asarray(origin, dtype=int),
        subsets=subsets,
        splits=splits,
    )


def _check_partition(plan, values, what):
    values = np.asarray(values, dtype=float)
    if values.shape[0] != plan.k_prime:
        raise PartitionError(
            f"{what} vector has {values.shape[0]} entries for {plan.k_prime} virtual users"
        )
    total = float(np.sum(values))
    share = total / plan.n_subsets
    for s in plan.subsets:
        gap = abs(float(np.sum(values[s])) - share)
        if gap > 1e-9 * max(share, 1.0):
            raise PartitionError(
                f"subset sum deviates from {what} total/N by {gap:.3e}; "
                "not a symmetric sum partition"
            )
    return values, total


def allocate_orthogonal(plan, rates):
    """Powers for an N-orthogonal-sequence allocation meeting ``rates``.

    Virtual users in subset n all transmit on basis vector ``e_n``.
    Within a subset, a user suffers interference only from lower-index
    users; its power is that interference factor times
    ``(exp(2 N r) - 1)/N``, which telescopes to an identical total
    ``(exp(2 r_tot) - 1)/N`` in every subset. Decoding highest index
    first achieves the rates by successive cancellation.
    """
    rates, r_tot = _check_partition(plan, rates, "rate")
    n = plan.n_subsets
    powers = np.zeros(plan.k_prime)
    seq_index = np.zeros(plan.k_prime, dtype=int)
    decode_order = []
    for dim, members in enumerate(plan.subsets):
        interference = 1.0
        for v in members:
            growth = math.exp(2.0 * n * rates[v])
            powers[v] = interference * (growth - 1.0) / n
            interference *= growth
            seq_index[v] = dim
        decode_order.append(list(reversed(members)))
    return OrthoAllocation(sequence_index=seq_index, powers=powers, decode_order=decode_order)


def orthogonal_capacity_allocation(plan, powers):
    """Rates achieved by N orthogonal sequences under a power partition.

    Mirror of :func:`allocate_orthogonal` for the power-constrained
    problem: within each subset users stack on one dimension and each
    earns the determinant increment of its own arrival. Subset rate
    sums are equal and the grand total is ``log(1 + p_tot)/2`` nats.
    """
    powers, p_tot = _check_partition(plan, powers, "power")
    n = plan.n_subsets
    rates = np.zeros(plan.k_prime)
    for members in plan.subsets:
        level = 1.0
        for v in members:
            new_level = level + n * powers[v]
            rates[v] = math.log(new_level / level) / (2.0 * n)
            level = new_level
    return rates
