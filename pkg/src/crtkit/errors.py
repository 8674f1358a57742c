"""Exception types shared across the package."""


class CrtkitError(Exception):
    """Base class for all errors raised by this package."""


class InputError(CrtkitError, ValueError):
    """Malformed input: bad sizes, labels out of range, unparseable files."""


class PreconditionError(CrtkitError, ValueError):
    """A documented precondition of an operation does not hold."""


class StructureError(CrtkitError, ValueError):
    """The input fails to have the structure an algorithm relies on.

    Carries evidence in the message (the offending operation, pair, or
    projection) so callers can report why the specialized path refused.
    """


class ClassificationError(CrtkitError):
    """A two-element algebra fit none of the known clone cases."""


class BudgetExceededError(CrtkitError):
    """A bounded search ran out of budget before reaching an answer."""

    def __init__(self, message: str, checked: int = 0, budget: int = 0):
        super().__init__(message)
        self.checked = checked
        self.budget = budget
