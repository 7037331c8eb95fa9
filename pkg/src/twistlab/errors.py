"""Shared exception types."""


class TwistlabError(Exception):
    """Base class for all workbench errors."""


class BudgetError(TwistlabError):
    """A requested computation exceeds a configured size budget."""


class ContextMismatchError(TwistlabError):
    """Operands belong to different ring contexts."""


class NotAUnitError(TwistlabError):
    """Inversion was requested for an element that is not a unit."""


class IndependenceError(TwistlabError):
    """Independence certification failed; carries the blocking relation."""

    def __init__(self, message, relation=None):
        super().__init__(message)
        self.relation = relation


class SeparationError(TwistlabError):
    """No materialized tower level separates a pair of support points."""

    def __init__(self, message, blocking_pair=None):
        super().__init__(message)
        self.blocking_pair = blocking_pair


class InternalFaultError(TwistlabError):
    """An internal consistency check failed; this falsifies the construction
    and must abort loudly rather than be handled."""
