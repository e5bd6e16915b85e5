"""Exception taxonomy shared by all modules.

The CLI maps these onto exit codes: input/format problems exit 2,
numeric/degenerate problems exit 3, OS-level I/O problems exit 4.
"""


class SidMetricsError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(SidMetricsError):
    """A file violates its format grammar. ``field`` names the offender."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class DataError(SidMetricsError):
    """Payload values are invalid (non-finite entries etc.)."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        super().__init__(message)
        self.row = row
        self.col = col


class EmptyCloudError(SidMetricsError):
    """A cloud with zero samples or zero dimensions."""


class ShapeError(SidMetricsError):
    """Dimension mismatch between clouds, kernels or queries."""


class InsufficientSamplesError(SidMetricsError):
    """An operation needs more samples than the cloud provides."""


class NumericError(SidMetricsError):
    """A numeric routine failed (non-convergence, non-PSD matrix, ...)."""


class UnsupportedModeError(SidMetricsError):
    """A mode was requested that the kernel branch does not support."""


class KernelOverflowError(SidMetricsError):
    """A kernel sum left float64 range. Carries the offending log magnitude."""

    def __init__(self, message: str, exponent_magnitude: float):
        super().__init__(message)
        self.exponent_magnitude = exponent_magnitude


class DegenerateTargetError(SidMetricsError):
    """Target cloud has zero spread; no hypercube sweep is possible."""


class UnknownNameError(SidMetricsError):
    """Lookup of a metric, target, source or preset name failed."""


class EmptyRankingError(SidMetricsError):
    """No source carries the requested metric(s) for the target."""


class EmptyRangeError(SidMetricsError):
    """The subspace-size range is empty (dimension too small)."""
