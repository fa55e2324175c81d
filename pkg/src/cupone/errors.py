"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input is outside the mathematical domain of the operation."""


class DegreeError(DomainError):
    """A degree/bidegree constraint is violated (inhomogeneous or mismatched)."""


class SizeError(DomainError):
    """An input exceeds the supported size guard."""


class PreconditionError(DomainError):
    """A stated precondition fails; the message names the offending object."""
