"""Exception types shared across the package."""


class TrekMomentsError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGraph(TrekMomentsError):
    """Graph violates basic invariants (self-loop, duplicate edge, bad vertex)."""


class CyclicGraph(TrekMomentsError):
    """Operation requires an acyclic graph but a directed cycle exists."""


class NotPolytree(TrekMomentsError):
    """Operation requires a polytree."""


class Disconnected(TrekMomentsError):
    """Operation requires a connected graph."""


class NoTrek(TrekMomentsError):
    """A trek required by the operation does not exist."""


class SingularSystem(TrekMomentsError):
    """I - Lambda is not invertible."""


class NonPositiveDiagonal(TrekMomentsError):
    """A diagonal covariance entry needed as a divisor is not positive."""


class ShapeMismatch(TrekMomentsError):
    """Moment data dimensions do not match the graph."""


class AsymmetricInput(TrekMomentsError):
    """Input matrix or tensor is not symmetric."""


class NotPartition(TrekMomentsError):
    """Hidden/observed sets do not partition the vertex set."""


class DownstreamEdge(TrekMomentsError):
    """An observed-to-hidden edge violates the upstream condition."""


class DimensionMismatch(TrekMomentsError):
    """Vector length does not match the constraint system."""


class Infeasible(TrekMomentsError):
    """Linear program has no feasible point."""


class Unbounded(TrekMomentsError):
    """Linear program objective is unbounded above."""


class BadLabels(TrekMomentsError):
    """Augmented-matrix row/column labels do not combine into valid indices."""


class InputError(TrekMomentsError):
    """Malformed user-supplied file or option."""
