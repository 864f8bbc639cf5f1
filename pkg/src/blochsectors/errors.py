"""Exception types shared by all modules."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class SizeError(ValueError):
    """Problem too large for the requested (exponential) algorithm."""


class ConsistencyError(RuntimeError):
    """Internal invariant violated; indicates a bug, not bad input."""
