"""Exception hierarchy.

Every error raised by the library derives from :class:`SelfSimError`.  The
intermediate classes group errors by the CLI exit code they map to.
"""


class SelfSimError(Exception):
    exit_code = 1


class SpecError(SelfSimError):
    """Bad input description (exit code 2)."""

    exit_code = 2

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


class KssSyntaxError(SpecError):
    def __init__(self, message, line=None, col=None, expected=()):
        self.expected = tuple(expected)
        if self.expected:
            message = f"{message} (expected {', '.join(self.expected)})"
        super().__init__(message, line, col)


class DigitRangeError(SpecError):
    pass


class ArityMismatchError(SpecError):
    pass


class DuplicateStateError(SpecError):
    pass


class NoInitialError(SpecError):
    pass


class MultipleInitialError(SpecError):
    pass


class UnknownStateError(SpecError):
    pass


class DeadStateError(SpecError):
    def __init__(self, state, line=None, col=None):
        self.state = state
        super().__init__(f"state {state!r} has no infinite continuation", line, col)


class EmptySetError(SpecError):
    pass


class BaseMismatchError(SpecError):
    pass


class BaseOverflowError(SpecError):
    pass


class UnknownSetError(SpecError):
    pass


class UnsupportedDimensionError(SpecError):
    pass


class ResolutionMismatchError(SpecError):
    pass


class BudgetError(SelfSimError):
    """A configured size cap was exceeded (exit code 3)."""

    exit_code = 3


class KernelOverflowError(BudgetError):
    pass


class PathBudgetExceededError(BudgetError):
    pass


class BudgetExceededError(BudgetError):
    pass


class ToleranceNotReachedError(SelfSimError):
    """Iteration cap hit before the requested width; ``result`` holds the best enclosure."""

    exit_code = 4

    def __init__(self, message, result=None):
        self.result = result
        super().__init__(message)


class VerificationFailedError(SelfSimError):
    exit_code = 5

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)
