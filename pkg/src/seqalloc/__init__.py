"""Spreading-sequence and power/rate allocation for synchronous CDMA.

The package solves two dual design problems on a symbol-synchronous
system with processing gain N: meet per-user rate demands at minimum
total received power, or maximize the sum rate under per-user power
constraints. Both reduce to steering the spectrum of the
signal-plus-interference matrix through rank-one updates, using a
constructive converse of the eigenvalue interlacing theorem. The
resulting designs need at most 2N - 1 distinct sequences (2N - L - 1
with L oversized users), or exactly N orthogonal ones if a few users
may split across two dimensions. Every optimality claim can be
re-checked against an independent Jacobi eigenvalue oracle.
"""

from .alloc import (
    Allocation,
    ProblemInstance,
    SpectrumState,
    StepRecord,
    allocate_max_rate,
    allocate_min_power,
    allocate_with_oversized,
    check_oversized,
    peel_oversized,
    sequence_audit,
)
from .errors import (
    ConvergenceError,
    DimensionMismatchError,
    InterlacingError,
    OversizedUserError,
    PartitionError,
    SequenceDesignError,
)
from .iep import (
    ClusterReduction,
    cluster_reduce,
    converse_weyl,
    diagonal_update_vector,
    interlaces,
    same_direction_update,
)
from .linalg import eig_oracle, eigvals_oracle, plane_rotation, rank1_add
from .split import (
    OrthoAllocation,
    PartitionPlan,
    allocate_orthogonal,
    make_partition,
    orthogonal_capacity_allocation,
)
from .verify import (
    BoundChainReport,
    NecessityReport,
    RegionCheckReport,
    bound_chain,
    necessity_demo,
    region_membership,
    vertex_rates,
)

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "BoundChainReport",
    "ClusterReduction",
    "ConvergenceError",
    "DimensionMismatchError",
    "InterlacingError",
    "NecessityReport",
    "OrthoAllocation",
    "OversizedUserError",
    "PartitionError",
    "PartitionPlan",
    "ProblemInstance",
    "RegionCheckReport",
    "SequenceDesignError",
    "SpectrumState",
    "StepRecord",
    "allocate_max_rate",
    "allocate_min_power",
    "allocate_orthogonal",
    "allocate_with_oversized",
    "bound_chain",
    "check_oversized",
    "cluster_reduce",
    "converse_weyl",
    "diagonal_update_vector",
    "eig_oracle",
    "eigvals_oracle",
    "interlaces",
    "make_partition",
    "necessity_demo",
    "orthogonal_capacity_allocation",
    "peel_oversized",
    "plane_rotation",
    "rank1_add",
    "region_membership",
    "same_direction_update",
    "sequence_audit",
    "vertex_rates",
]
