"""Exception and warning types.

Every error carries an ``exit_code`` so the command-line front end can map
failures to distinct process exit statuses.
"""


class SensorError(ValueError):
    """Base class for all errors raised by this package."""

    exit_code = 10


class EmptyMatrix(SensorError):
    exit_code = 11


class MaxPivotsTooLarge(SensorError):
    exit_code = 12


class RankTooLarge(SensorError):
    exit_code = 13


class DimensionMismatch(SensorError):
    exit_code = 14


class NonFiniteInput(SensorError):
    exit_code = 15


class TooManyModes(SensorError):
    exit_code = 20


class NegativeCost(SensorError):
    exit_code = 21


class OutOfRange(SensorError):
    exit_code = 22


class IndexOutOfRange(SensorError):
    exit_code = 23


class InfeasibleSparsity(SensorError):
    exit_code = 30


class ZeroDictionary(SensorError):
    exit_code = 31


class NonPositiveAlpha(SensorError):
    exit_code = 32


class SingleClass(SensorError):
    exit_code = 40


class EmptyClass(SensorError):
    exit_code = 41


class NoSensorsSelected(SensorError):
    exit_code = 42


class ParseError(SensorError):
    exit_code = 50


class LabelColumnMissing(SensorError):
    exit_code = 51


class InvalidParams(SensorError):
    exit_code = 52


class SensorWarning(UserWarning):
    """Non-fatal conditions: oversampling past the meaningful ranking,
    padded sensor selections, degenerate discriminant directions."""
