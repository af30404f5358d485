"""Exception types shared across the package."""


class SequenceDesignError(Exception):
    """Base class for errors raised by seqalloc."""


class DimensionMismatchError(SequenceDesignError):
    """Operands have incompatible shapes."""


class ConvergenceError(SequenceDesignError):
    """The eigensolver did not reach its threshold within the sweep cap."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InterlacingError(SequenceDesignError):
    """A target spectrum fails to interlace the current spectrum.

    ``index`` is the position of the first violated inequality, counting
    the alternating chain from the top pair downward, or None when the
    failure is not tied to a single position.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class OversizedUserError(SequenceDesignError):
    """One or more users demand more than a shareable slice of the system."""

    def __init__(self, message, users=()):
        super().__init__(message)
        self.users = tuple(users)


class PartitionError(SequenceDesignError):
    """A partition plan violates the equal-subset-sum contract."""
