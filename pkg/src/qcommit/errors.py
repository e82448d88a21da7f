"""Exception types shared across the library."""


class QCommitError(Exception):
    """Base class for all library errors."""


class LayoutError(QCommitError):
    """Register-layout problem: duplicate names, unknown register, bad widths."""


class DimensionMismatchError(QCommitError):
    """Operands have incompatible dimensions."""


class CapacityError(QCommitError):
    """Requested simulation would exceed the live-qubit cap."""


class QueryBudgetError(QCommitError):
    """Compressed oracle has no queries left in its declared budget."""


class StateError(QCommitError):
    """State violates an operation's precondition (norm, ancilla not |0>, ...)."""


class ContractViolationError(QCommitError):
    """An adversary/committer strategy touched registers it must not."""
