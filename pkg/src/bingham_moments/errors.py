"""Exception hierarchy."""


class BinghamError(Exception):
    """Base class for all library errors."""


class DomainError(BinghamError, ValueError):
    """Input outside the contracted domain of an operation."""


class ConvergenceError(BinghamError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Carries the best available estimate and its error estimate.
    """

    def __init__(self, message, best_estimate=None, error_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class TableError(BinghamError):
    """Base class for precomputed-table problems."""


class TableFormatError(TableError):
    """Bad magic or otherwise unparseable container."""


class TableVersionError(TableError):
    """Unsupported format version."""


class TableChecksumError(TableError):
    """Payload checksum mismatch."""


class TableTruncationError(TableError):
    """Stream ended before the declared payload length."""


class TableCountError(TableError):
    """Header counts inconsistent with each other or the payload."""


class TableStateError(TableError):
    """Operation requires loaded, validated tables."""
