"""Exception hierarchy shared by all tcox modules."""


class TcoxError(Exception):
    """Base class for all errors raised by tcox."""


class DegeneratePoints(TcoxError):
    """Points on P^1 that are zero, repeated or pairwise proportional."""


class TailMismatch(TcoxError):
    """Minkowski sum or divisor coefficient with an incompatible tail cone."""


class UnboundedBelow(TcoxError):
    """A linear form is not bounded below on a polyhedron (u outside the dual tail cone)."""


class EmptyPolyhedron(TcoxError):
    """An operation that needs a non-empty polyhedron received the empty one."""


class NonCompleteLocus(TcoxError):
    """A polyhedral divisor has an empty coefficient where a complete locus is required."""


class InvalidFan(TcoxError):
    """A collection of polyhedral divisors is not a valid (complete) divisorial fan."""


class InvalidGraph(TcoxError):
    """An Orlik-Wagreich graph that cannot come from a smooth rational K*-surface."""


class InvalidBundle(TcoxError):
    """Inconsistent filtration data for an equivariant rank-2 bundle."""


class UnknownLabel(TcoxError, KeyError):
    """A generator label that does not belong to the presentation."""

    def __str__(self):
        return Exception.__str__(self)


class InvalidBasis(TcoxError, ValueError):
    """Proposed group elements that are not a basis with the stated orders."""


class GradingUnavailable(TcoxError):
    """The presentation carries no grading for the requested computation."""


class SchemaError(TcoxError):
    """Malformed input document; ``path`` names the offending field."""

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
