"""Exception types shared across the toolkit."""


class MolekitError(Exception):
    """Base class for all toolkit errors."""


class BudgetExhausted(MolekitError):
    """The objective-evaluation budget of a problem has been consumed."""


class OutOfBounds(MolekitError):
    """A point violates the problem's box constraints."""


class NonFiniteObjective(MolekitError):
    """An evaluator produced NaN or infinite objective values."""


class UnknownProblem(MolekitError):
    """No test problem is registered under the requested name."""


class MissingBounds(MolekitError):
    """An operation requiring box bounds received neither bounds nor a fallback box."""


class DimensionMismatch(MolekitError):
    """The problem dimension does not match what the operation supports."""


class NotComparablePair(MolekitError):
    """A pair of objective vectors expected to be mutually nondominating is not."""


class OrderingViolation(MolekitError):
    """A node cannot be placed in a set model without breaking monotone ordering."""


class StalledRefinement(MolekitError):
    """A post-processing iteration made no progress (neither insert nor gap reduction)."""


class IterationCap(MolekitError):
    """An iteration limit was reached before the algorithm's own stopping rule fired."""
