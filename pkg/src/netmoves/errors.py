"""Exception types shared across the package."""


class StructureError(Exception):
    """A graph failed the structural requirements for a network.

    ``violations`` holds one human-readable entry per defect, in the same
    order the validator reports them.
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        super().__init__("; ".join(self.violations))


class InvalidMove(Exception):
    """A move's precondition does not hold on the given network."""


class NotDistanceOne(Exception):
    """A rewrite was requested for a move that is not distance-1."""


class ExceptionalNetwork(Exception):
    """The input is one of the two small networks for which no tail-move
    transformation to a non-isomorphic network exists."""


class TierMismatch(Exception):
    """Two networks do not share the same taxa and reticulation number."""


class TooFewLeaves(Exception):
    """The operation needs at least two labeled leaves."""


class Unrootable(Exception):
    """An unrooted network admits no rooted orientation.

    ``witness`` is a redundant cut-edge proving it.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CompositionInvalid(Exception):
    """The parts handed to a network composition do not fit together."""


class ScaleLimitExceeded(Exception):
    """An exhaustive operation was asked to run beyond its guard limits."""


class PreconditionViolated(Exception):
    """An operation-specific precondition failed."""


class ProjectionBlocked(Exception):
    """No alternative move selection keeps every intermediate projectable
    to an unrooted network (internal; indicates an input outside the
    empirically verified range)."""
