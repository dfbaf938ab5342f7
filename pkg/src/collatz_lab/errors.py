"""Exception types shared across the package."""


class CollatzLabError(Exception):
    """Base class for all errors raised by collatz_lab."""


class DivisionByZero(CollatzLabError, ZeroDivisionError):
    pass


class NotConvergent(CollatzLabError):
    """A sequence descriptor does not carry a declared limit."""


class ConditionOnNull(CollatzLabError):
    """Conditioning on a set of density zero."""


class BranchBudgetExceeded(CollatzLabError):
    pass


class TrajectoryBudgetExceeded(CollatzLabError):
    """An orbit ran out of step or bit budget.

    This means "undecided". It is never evidence of divergence.
    """


class NotEventuallyConstant(CollatzLabError):
    pass


class NoMixingLimit(CollatzLabError):
    """The chain violates |p00 + p11 - 1| < 1."""


class InvalidChain(CollatzLabError, ValueError):
    pass


class DerivationMismatch(CollatzLabError):
    pass


class AssumptionRequired(CollatzLabError):
    pass


class PlusUndefined(CollatzLabError):
    """The sum of two encodings lies outside the injection's image."""


class NotEven(CollatzLabError):
    pass


class PreconditionFailed(CollatzLabError):
    pass
