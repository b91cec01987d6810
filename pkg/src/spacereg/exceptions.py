"""Exception types raised by the library.

All library errors derive from :class:`SpaceregError` so callers can catch
them in one place; the subclasses distinguish user errors (bad arguments,
malformed files) from numerical failures discovered at run time.
"""


class SpaceregError(Exception):
    """Base class for all spacereg errors."""


class InvalidArgumentError(SpaceregError, ValueError):
    """An argument violates a documented precondition."""


class CsvFormatError(SpaceregError, ValueError):
    """An input CSV file could not be parsed; the message names the row."""


class DegenerateGridError(SpaceregError, ValueError):
    """A candidate grid collapsed (lower bound is not below the upper)."""


class SingularWindowError(SpaceregError):
    """The local design matrix at an evaluation point is degenerate."""


class NoValidBandwidthError(SpaceregError):
    """Cross-validation found no candidate with any valid prediction."""


class NoSolutionError(SpaceregError):
    """A root-finding problem has no solution in the allowed interval."""


class UndefinedMetricError(SpaceregError):
    """An error metric is undefined (e.g. no valid points to score)."""
