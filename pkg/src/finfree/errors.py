"""Exception hierarchy shared by every module."""


class FinFreeError(Exception):
    """Base class for library errors."""


class DegreeError(FinFreeError, ValueError):
    """Degrees of the inputs are incompatible with the requested operation."""


class DomainError(FinFreeError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleError(DomainError):
    """A transform was evaluated at a root of the polynomial."""


class BudgetError(FinFreeError):
    """An exact enumeration would exceed its hard size limit."""
