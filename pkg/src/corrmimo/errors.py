"""Exception hierarchy.

Input/configuration problems derive from :class:`ValueError`; numerical
failures on valid inputs derive from :class:`ArithmeticError`. The CLI maps
the first family to exit code 1 and the second to exit code 2.
"""


class CorrMimoError(Exception):
    """Base class for every error raised by this package."""


class InputError(CorrMimoError, ValueError):
    pass


class NumericalError(CorrMimoError, ArithmeticError):
    pass


# matkernel
class NotPositiveDefinite(NumericalError):
    pass


class NonRealDiagonal(NumericalError):
    pass


# fading
class InvalidShape(InputError):
    pass


class DomainError(InputError):
    pass


# channel
class RhoOutOfRange(InputError):
    pass


class DimensionMismatch(InputError):
    pass


# receivers
class RankDeficient(NumericalError):
    pass


class ApproximationInvalid(NumericalError):
    pass


# montecarlo / cli
class ConfigInvalid(InputError):
    """Raised with a field-level message, e.g. ``"rho_rx: must lie in [0, 1]"``."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


ValidationError = ConfigInvalid


class ParseError(InputError):
    pass


class EmptySamples(InputError):
    pass


class BadProbability(InputError):
    pass
