"""
Errors - Exception hierarchy shared by every module.

Most errors also derive from a builtin (ValueError, RuntimeError, OSError) so
callers that only know the builtin contract keep working.
"""


class LastPassageError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(LastPassageError, ValueError):
    """Model or suite configuration is invalid for the requested operation."""


class UnsupportedFamily(ConfigError):
    """Jump family or sign pattern not supported by the requested computation."""


class ZeroProbabilityEvent(LastPassageError, ValueError):
    """No enumerated path satisfies the conditioning event."""


class SizeLimit(LastPassageError, ValueError):
    """Enumeration would visit more paths than the configured cap."""


class InvalidSigma(LastPassageError, ValueError):
    """A last-passage time outside [0, t_end] was supplied."""


class NoConvergence(LastPassageError, RuntimeError):
    """An iterative computation did not converge within its iteration or time cap."""


class DomainError(LastPassageError, ValueError):
    """Argument outside the domain where the quantity is defined."""


class EmptySample(LastPassageError, ValueError):
    """A statistic was requested on an empty sample."""


class ReportIOError(LastPassageError, OSError):
    """A report or sample dump could not be written."""
