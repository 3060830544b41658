"""Exception hierarchy shared by all thermoshift modules."""


class ThermoshiftError(Exception):
    """Base class for every error raised by the library."""


class SpecError(ThermoshiftError, ValueError):
    """A beta, potential, window or word specification could not be parsed."""


class IntegerBeta(ThermoshiftError, ValueError):
    """The requested beta is an integer (the full shift is excluded)."""


class InvalidIsolation(ThermoshiftError, ValueError):
    """The isolating interval does not contain exactly one root greater than 1."""


class DegreeTooLarge(ThermoshiftError, ValueError):
    pass


class NonPositiveRemainder(ThermoshiftError, ValueError):
    pass


class AlphabetError(ThermoshiftError, ValueError):
    """A letter lies outside {0, ..., b-1}."""


class Inadmissible(ThermoshiftError, ValueError):
    """A word or point is not in the language of the beta-shift."""


class NotAPrefix(ThermoshiftError, ValueError):
    pass


class BudgetExceeded(ThermoshiftError, RuntimeError):
    """An enumeration would exceed the configured budget."""


class TailTruncationError(ThermoshiftError, RuntimeError):
    """The certified truncation error of an infinite sum exceeds the tolerance."""


class NotConjugate(ThermoshiftError, ValueError):
    pass


class WindowTooLarge(ThermoshiftError, ValueError):
    pass


class MarginViolated(ThermoshiftError, RuntimeError):
    """The equilibrium margin is not positive at the tested depth."""


class ZeroRunWarning(UserWarning):
    """The digit stream produced an unusually long run of zeros."""
