"""Exception types shared across the package."""


class VnLatticeError(Exception):
    """Base class for all package errors."""


class DomainError(VnLatticeError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class PrecisionError(VnLatticeError, RuntimeError):
    """A computation cannot meet its accuracy contract.

    When raised by an order-doubling check, ``coarse`` and ``fine`` carry
    the two disagreeing values.
    """

    def __init__(self, message, coarse=None, fine=None):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine


class DivergenceError(VnLatticeError, RuntimeError):
    """Window growth exceeded the configured maximum extent."""


class AnalysisError(VnLatticeError, RuntimeError):
    """A structural assumption of an analysis routine failed (e.g. unimodality)."""


class UsageError(VnLatticeError, ValueError):
    """Unparseable user input such as a malformed state specification."""
