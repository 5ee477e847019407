"""Exception types raised by the ricker2 package."""


class RickerError(Exception):
    """Base class for all ricker2 errors."""


class EmptyCycle(RickerError):
    """A parameter cycle needs at least one value."""


class NonFiniteValue(RickerError):
    """A parameter value is NaN or infinite."""


class NonMinimalPeriod(RickerError):
    """The given values repeat with a proper divisor of their length."""

    def __init__(self, divisor: int):
        self.divisor = divisor
        super().__init__(
            f"values already repeat with period {divisor}; "
            "pass one minimal period only"
        )


class NonFiniteState(RickerError):
    """An orbit left the representable range (NaN or overflow)."""


class NotPeriodicFactor(RickerError):
    """The factor sequence is unbounded, so no return map exists."""


class RhoOutOfRange(RickerError):
    """inf a_n must lie in (0, 2) for the invariant interval."""


class UnboundedSubsequence(RickerError):
    """The selected factor subsequence diverges; no finite sup exists."""


class WindowTooShort(RickerError):
    """The trace window cannot support the requested cycle search."""


class NoConvergence(RickerError):
    """An iteration did not settle onto a cycle within the step budget."""


class HypothesisViolationWarning(UserWarning):
    """A result was computed outside its guaranteed parameter range."""
