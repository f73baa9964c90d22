"""Exception hierarchy.

Two families matter to callers: :class:`ConfigError` (bad input, CLI exit
code 2) and :class:`NumericalError` (a computation could not be carried out,
CLI exit code 3).
"""


class FluxionError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(FluxionError, ValueError):
    """Invalid parameters or run configuration."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class NonPositiveDecay(ConfigError):
    pass


class NegativeRabi(ConfigError):
    pass


class NonFiniteField(ConfigError):
    pass


class UnsortedTimes(ConfigError):
    pass


class UnsortedGrid(ConfigError):
    pass


class NumericalError(FluxionError, ArithmeticError):
    """A numerical routine could not produce a trustworthy result."""


class NonFiniteInput(NumericalError):
    pass


class SingularMatrix(NumericalError):
    def __init__(self, message: str, pivot_ratio: float = 0.0):
        super().__init__(message)
        self.pivot_ratio = pivot_ratio


class StepTooLarge(NumericalError):
    pass


class NotConverged(NumericalError):
    pass


class ZeroRabiProduct(NumericalError):
    pass
