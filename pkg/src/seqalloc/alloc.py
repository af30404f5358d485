"""Sequential sequence and power/rate allocation.

Two dual algorithms share one engine. Both walk the users once,
tracking the eigenvalues of the signal-plus-interference matrix and the
orthonormal basis that diagonalizes it. Each user changes at most two
eigenvalues: either the currently filling dimension grows toward the
common cap (same eigenvector, repeated sequence), or it tops out and
the excess spills into the next dimension through a plane rotation of
two basis columns. The rate-constrained variant multiplies eigenvalues
and minimizes total received power; the power-constrained variant adds
to them and maximizes the sum rate. Per-user work is O(N), so a full
run costs O(KN) plus one O(N^3) term for the at most N-1 rotations.

Rates are handled in nats per chip throughout this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OversizedUserError
from .linalg import plane_rotation

#: Relative width of the band around the cap treated as an exact fill.
TOL_FILL = 1e-12

#: Relative overshoot of the cap tolerated on the last dimension before
#: the input is declared inconsistent (absorbs rounding drift on long runs).
_LAST_DIM_SLACK = 1e-8

MODE_RATES = "rates"
MODE_POWERS = "powers"


@dataclass(frozen=True)
class ProblemInstance:
    """A processing gain plus one demand per user.

    ``demands`` holds rates in nats/chip when ``mode == "rates"``
    (minimize sum power) and receive powers in units/chip when
    ``mode == "powers"`` (maximize sum rate).
    """

    n_dims: int
    demands: np.ndarray
    mode: str

    def __post_init__(self):
        if self.mode not in (MODE_RATES, MODE_POWERS):
            raise ValueError(f"mode must be '{MODE_RATES}' or '{MODE_POWERS}', got {self.mode!r}")
        if int(self.n_dims) < 1:
            raise ValueError("processing gain must be a positive integer")
        demands = np.asarray(self.demands, dtype=float)
        if demands.ndim != 1 or demands.size == 0:
            raise ValueError("demands must be a nonempty 1-d array")
        if not np.all(np.isfinite(demands)) or np.any(demands <= 0.0):
            raise ValueError("all demands must be positive and finite")
        object.__setattr__(self, "n_dims", int(self.n_dims))
        object.__setattr__(self, "demands", demands)

    @property
    def n_users(self):
        return self.demands.shape[0]

    @property
    def total(self):
        return float(np.sum(self.demands))


@dataclass
class SpectrumState:
    """Running eigenvalue list of the interference matrix.

    Positions before ``fill`` sit at the cap (within the fill
    tolerance), positions after it are still exactly 1, and position
    ``fill`` is the dimension currently absorbing users.
    """

    lam: np.ndarray
    fill: int
    lam_max: float


@dataclass
class StepRecord:
    """What happened when one user was added."""

    user: int
    case: str  # '2a' | '2b' | '2c'
    lam: np.ndarray
    c: np.ndarray
    assigned: float


@dataclass
class Allocation:
    """Joint output: sequences, powers, rates, and the final eigenbasis."""

    S: np.ndarray
    p: np.ndarray
    r: np.ndarray
    basis_final: np.ndarray
    distinct_count: int


def check_oversized(inst: ProblemInstance):
    """Flag users whose demand exceeds a 1/N share of the total (strictly).

    Demands exactly on the boundary are allowed, so rounding in the
    total must not flip them; the comparison carries an epsilon-sized
    relative slack.
    """
    return inst.n_dims * inst.demands > inst.total * (1.0 + 1e-12)


def _as_order(order, k):
    if order is None:
        return np.arange(k)
    order = np.asarray(order, dtype=int)
    if sorted(order.tolist()) != list(range(k)):
        raise ValueError(f"order must be a permutation of 0..{k - 1}")
    return order


def _refuse_oversized(inst):
    flags = check_oversized(inst)
    if np.any(flags):
        users = np.flatnonzero(flags)
        raise OversizedUserError(
            f"oversized user(s) {users.tolist()}: demand exceeds total/{inst.n_dims}; "
            "peel them to private dimensions first",
            users=users.tolist(),
        )


def _fill_engine(loads, multiplicative, dims, lam_max, n_chips, users, tol_fill):
    """Add users one by one, filling dimensions up to ``lam_max``.

    ``loads[j]`` is user j's eigenvalue increment: a factor
    ``exp(2 N r_j)`` when ``multiplicative``, an addend ``N p_j``
    otherwise. Returns the sequence columns, squared update norms,
    per-user log-determinant increments, step records, and the final
    basis. ``users`` carries original indices for the records.
    """
    k = loads.shape[0]
    state = SpectrumState(lam=np.ones(dims), fill=0, lam_max=lam_max)
    lam = state.lam
    basis = np.eye(dims)
    seqs = np.zeros((dims, k))
    norm2 = np.zeros(k)
    logdet_inc = np.zeros(k)
    trace = []

    for j in range(k):
        load = loads[j]
        if state.fill >= dims:
            # Reachable only when rounding drift finished the last
            # dimension one user early; the leftover load is noise-sized.
            state.fill = dims - 1
        fill = state.fill
        old = lam[fill]
        cand = old * load if multiplicative else old + load
        if abs(cand - lam_max) <= tol_fill * lam_max:
            case = "2b"
        elif cand < lam_max:
            case = "2a"
        else:
            case = "2c"

        if case == "2c" and fill == dims - 1:
            if cand <= lam_max * (1.0 + _LAST_DIM_SLACK):
                case = "2b"  # accumulated rounding, not a real break-out
            else:
                raise OversizedUserError(
                    f"user {users[j]} overflows the last dimension: demands are "
                    "inconsistent with the cap",
                    users=[int(users[j])],
                )

        if case in ("2a", "2b"):
            # One eigenvalue moves; eigenvectors are untouched and the
            # sequence repeats the current dimension's direction.
            amount = cand - old
            c = math.sqrt(amount) * basis[:, fill]
            lam[fill] = cand
            norm2[j] = amount
            logdet_inc[j] = math.log(cand / old)
            if case == "2b":
                state.fill += 1
        else:
            nxt = fill + 1
            low = lam[nxt]  # still exactly 1
            if multiplicative:
                spill = low * old * load / lam_max
            else:
                spill = low + old + load - lam_max
            hat_hi, hat_lo = lam_max, spill
            gap = old - low
            alpha = math.sqrt(
                _clip01((hat_hi - low) * (old - hat_lo) / ((hat_hi - hat_lo) * gap))
            )
            beta = math.sqrt(
                _clip01((hat_lo - low) * (hat_hi - old) / ((hat_hi - hat_lo) * gap))
            )
            y_hi = math.sqrt(max(0.0, (hat_hi - old) * (old - hat_lo) / gap))
            y_lo = math.sqrt(max(0.0, (hat_hi - low) * (hat_lo - low) / gap))
            c = y_hi * basis[:, fill] + y_lo * basis[:, nxt]
            basis = plane_rotation(basis, fill, alpha, beta)
            lam[fill] = lam_max
            lam[nxt] = spill
            norm2[j] = (hat_hi - old) + (hat_lo - low)
            logdet_inc[j] = math.log(hat_hi / old) + math.log(hat_lo / low)
            state.fill = nxt

        seqs[:, j] = c / math.sqrt(norm2[j])
        assigned = norm2[j] / n_chips if multiplicative else logdet_inc[j] / (2.0 * n_chips)
        trace.append(StepRecord(int(users[j]), case, lam.copy(), c, assigned))

    return seqs, norm2, logdet_inc, trace, basis


def _clip01(x):
    # Rotation radicands live in [0, 1] exactly; rounding may poke out.
    return min(1.0, max(0.0, x))


def allocate_min_power(inst: ProblemInstance, order=None, tol_fill=TOL_FILL):
    """Sequences and powers meeting every rate at minimum total power.

    Users are processed in ``order`` (default: index order). Requires a
    rate-mode instance with no oversized user. The determinant of the
    interference matrix after each user equals ``exp(2N * sum of rates
    so far)``, the final matrix is ``exp(2 r_tot) I``, and the summed
    power hits the lower bound ``exp(2 r_tot) - 1``.

    Returns ``(Allocation, trace)`` with one StepRecord per user in
    processing order.
    """
    if inst.mode != MODE_RATES:
        raise ValueError("allocate_min_power expects a rates-mode instance")
    _refuse_oversized(inst)
    n = inst.n_dims
    order = _as_order(order, inst.n_users)
    rates = inst.demands[order]
    with np.errstate(over="ignore"):
        lam_max = float(np.exp(2.0 * inst.total))
        loads = np.exp(2.0 * n * rates)
    if not np.all(np.isfinite(loads)) or not math.isfinite(lam_max):
        raise ValueError("rate total too large for double precision")
    seqs, norm2, logdet_inc, trace, basis = _fill_engine(
        loads, True, n, lam_max, n, order, tol_fill
    )
    powers = norm2 / n
    s_full = np.zeros((n, inst.n_users))
    p_full = np.zeros(inst.n_users)
    s_full[:, order] = seqs
    p_full[order] = powers
    alloc = Allocation(
        S=s_full,
        p=p_full,
        r=inst.demands.copy(),
        basis_final=basis,
        distinct_count=sequence_audit(s_full),
    )
    return alloc, trace


def allocate_max_rate(inst: ProblemInstance, order=None, tol_fill=TOL_FILL):
    """Sequences and rates achieving sum capacity under power constraints.

    Dual of :func:`allocate_min_power`: eigenvalue updates are additive
    with cap ``1 + p_tot``, the trace after each user matches the power
    spent so far, and each user's rate is its determinant increment, a
    vertex of the realized capacity region. Rates are in nats/chip.
    """
    if inst.mode != MODE_POWERS:
        raise ValueError("allocate_max_rate expects a powers-mode instance")
    _refuse_oversized(inst)
    n = inst.n_dims
    order = _as_order(order, inst.n_users)
    powers = inst.demands[order]
    lam_max = 1.0 + inst.total
    loads = n * powers
    seqs, norm2, logdet_inc, trace, basis = _fill_engine(
        loads, False, n, lam_max, n, order, tol_fill
    )
    rates = logdet_inc / (2.0 * n)
    s_full = np.zeros((n, inst.n_users))
    r_full = np.zeros(inst.n_users)
    s_full[:, order] = seqs
    r_full[order] = rates
    alloc = Allocation(
        S=s_full,
        p=inst.demands.copy(),
        r=r_full,
        basis_final=basis,
        distinct_count=sequence_audit(s_full),
    )
    return alloc, trace


def peel_oversized(inst: ProblemInstance):
    """Indices of users that must take private dimensions, in peel order.

    Repeatedly removes the largest remaining demand while it exceeds a
    1/N' share of the remaining total on the shrinking system. The
    survivors satisfy the no-oversized condition on the reduced
    dimension count.
    """
    remaining = list(range(inst.n_users))
    demands = inst.demands
    dims = inst.n_dims
    peeled = []
    while remaining:
        total = float(np.sum(demands[remaining]))
        worst = max(remaining, key=lambda i: demands[i])
        if dims * demands[worst] <= total:
            break
        if dims <= 1:
            break  # a single dimension can always host everyone left
        peeled.append(worst)
        remaining.remove(worst)
        dims -= 1
    if dims < 1 or (len(peeled) >= inst.n_dims and remaining):
        raise OversizedUserError(
            "peeling exhausted every dimension", users=peeled
        )
    return peeled, remaining


def allocate_with_oversized(inst: ProblemInstance, order=None, tol_fill=TOL_FILL):
    """Allocation that first gives oversized users private dimensions.

    Oversized users get mutually orthogonal sequences, orthogonal to
    everything else; the rest are allocated on the remaining dimensions
    by the plain algorithm, which is optimal for the reduced system.
    With L peeled users the result uses at most 2N - L - 1 distinct
    sequences. Falls back to the plain allocator when nothing is
    oversized.
    """
    alloc, _ = _allocate_full(inst, order=order, tol_fill=tol_fill)
    return alloc


def _allocate_full(inst, order=None, tol_fill=TOL_FILL):
    """allocate_with_oversized plus the per-user step records."""
    peeled, remaining = peel_oversized(inst)
    if not peeled:
        if inst.mode == MODE_RATES:
            return allocate_min_power(inst, order=order, tol_fill=tol_fill)
        return allocate_max_rate(inst, order=order, tol_fill=tol_fill)

    n = inst.n_dims
    k = inst.n_users
    n_red = n - len(peeled)
    s_full = np.zeros((n, k))
    p_full = np.zeros(k)
    r_full = np.zeros(k)
    trace = []

    if remaining:
        sub_order = _as_order(order, k) if order is not None else np.arange(k)
        sub_order = np.array([u for u in sub_order if u in set(remaining)], dtype=int)
        demands_red = inst.demands[sub_order]
        if inst.mode == MODE_RATES:
            total_red = float(np.sum(demands_red))
            lam_max = math.exp(2.0 * n * total_red / n_red)
            loads = np.exp(2.0 * n * demands_red)
            multiplicative = True
        else:
            total_red = float(np.sum(demands_red))
            lam_max = 1.0 + n * total_red / n_red
            loads = n * demands_red
            multiplicative = False
        seqs, norm2, logdet_inc, trace, basis_red = _fill_engine(
            loads, multiplicative, n_red, lam_max, n, sub_order, tol_fill
        )
        s_full[:n_red, sub_order] = seqs
        if inst.mode == MODE_RATES:
            p_full[sub_order] = norm2 / n
            r_full[sub_order] = demands_red
        else:
            p_full[sub_order] = demands_red
            r_full[sub_order] = logdet_inc / (2.0 * n)
        # records come out in reduced coordinates; pad them so the trace
        # stays cumulative over the full N-dimensional system
        for rec in trace:
            rec.lam = np.concatenate([rec.lam, np.ones(n - n_red)])
            rec.c = np.concatenate([rec.c, np.zeros(n - n_red)])
    else:
        basis_red = np.eye(n_red)

    basis = np.eye(n)
    basis[:n_red, :n_red] = basis_red
    lam_running = trace[-1].lam.copy() if trace else np.ones(n)
    for slot, user in enumerate(peeled):
        dim = n_red + slot
        s_full[dim, user] = 1.0
        x = inst.demands[user]
        if inst.mode == MODE_RATES:
            p_full[user] = (math.exp(2.0 * n * x) - 1.0) / n
            r_full[user] = x
            level = math.exp(2.0 * n * x)
        else:
            p_full[user] = x
            r_full[user] = math.log(1.0 + n * x) / (2.0 * n)
            level = 1.0 + n * x
        lam_running = lam_running.copy()
        lam_running[dim] = level
        c = math.sqrt(level - 1.0) * basis[:, dim]
        trace.append(
            StepRecord(
                int(user),
                "2a",
                lam_running,
                c,
                p_full[user] if inst.mode == MODE_RATES else r_full[user],
            )
        )

    alloc = Allocation(
        S=s_full,
        p=p_full,
        r=r_full,
        basis_final=basis,
        distinct_count=sequence_audit(s_full),
    )
    return alloc, trace


def sequence_audit(s, tol_match=1e-9):
    """Number of distinct sequences in a column matrix, up to sign.

    Columns ``s_i`` and ``s_j`` count as one sequence when
    ``|s_i . s_j| >= 1 - tol_match``; sign flips do not change the
    rank-one contribution a sequence makes.
    """
    s = getattr(s, "S", s)
    s = np.asarray(s, dtype=float)
    reps = np.empty((0, s.shape[0]))
    for j in range(s.shape[1]):
        col = s[:, j]
        if reps.shape[0] == 0 or np.max(np.abs(reps @ col)) < 1.0 - tol_match:
            reps = np.vstack([reps, col])
    return reps.shape[0]
