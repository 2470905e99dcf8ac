"""Exception hierarchy shared by every module."""


class RamseyForgeError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(RamseyForgeError, ValueError):
    """Invalid input: malformed structure, bad family parameters, missing order."""


class PreconditionError(RamseyForgeError, ValueError):
    """An operation was called on inputs violating its documented precondition."""


class BudgetExceeded(RamseyForgeError):
    """A search space is larger than the configured budget.

    ``bound`` names the limit that tripped and ``needed`` the size requested.
    """

    def __init__(self, message, *, bound=None, needed=None):
        super().__init__(message)
        self.bound = bound
        self.needed = needed


class InternalCheckError(RamseyForgeError, AssertionError):
    """A re-validation that a proven construction must pass has failed.

    Raised as a bug trap: either the code is wrong or the construction is.
    """


class DoubleMatchError(InternalCheckError):
    """A fiber was found to inflate two distinct members of a non-sibling family."""
