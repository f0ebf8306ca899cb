"""Exception types raised across the toolkit."""


class EgschedError(Exception):
    """Base class for all toolkit errors."""


class EmptyGraphError(EgschedError):
    """Input graph has no nodes."""


class CyclicGraphError(EgschedError):
    """Input graph contains a directed cycle (or a self loop)."""


class InvalidDeadlineError(EgschedError):
    """Deadline is non-positive or exceeds the period."""


class TaskFormatError(EgschedError):
    """Task description is structurally malformed (bad indices, types, ...)."""


class InfeasibleDeadlineError(EgschedError):
    """The graph's length exceeds the deadline: no processor count helps."""


class EmptySubsetError(EgschedError):
    """Lower-bound computation called with an empty node subset."""


class NotTriviallySchedulableError(EgschedError):
    """Partitioned dispatch requires width <= M and length <= deadline."""


class InfeasibleScheduleError(EgschedError):
    """A schedule violates precedence, overlap, or deadline constraints."""


class NotOptimalError(EgschedError):
    """Optimality gap requested against a non-optimal exact result."""


class GenerationExhaustedError(EgschedError):
    """Task generator failed to hit the target cell within the retry budget."""


class PolicyProtocolError(EgschedError):
    """External policy returned a malformed, out-of-range, or masked action."""


class PolicyTimeoutError(PolicyProtocolError):
    """External policy did not answer within the per-step timeout."""
