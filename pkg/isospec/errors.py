"""Exception hierarchy for isospec.

Every error carries the process exit code the command line maps it to, so the
entry point can translate failures without a lookup table.
"""


class IsospecError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InvalidArgumentError(IsospecError, ValueError):
    """An argument is outside the domain an operation accepts."""

    exit_code = 2


class ConfigurationError(IsospecError):
    """An object was assembled from inconsistent or incomplete parts."""

    exit_code = 2


class MissingDerivativeError(ConfigurationError):
    """A coefficient function lacks an analytic derivative that was requested."""


class UnsupportedError(IsospecError):
    """The request is well formed but has no meaning for this object."""

    exit_code = 2


class UnsupportedOperatorError(UnsupportedError):
    """The operator cannot be brought into the form a solver needs."""


class NumericalError(IsospecError):
    """A numerical procedure failed to deliver the requested accuracy."""

    exit_code = 3


class AccuracyError(NumericalError):
    """Adaptive refinement ran out of budget before meeting its tolerance."""

    def __init__(self, message, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


class DivergenceError(NumericalError):
    """An improper integral does not converge."""


class SingularityError(NumericalError):
    """A function or coefficient is singular at the listed points."""

    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = tuple(float(p) for p in points)


class ValidityError(SingularityError):
    """The deformation parameter puts a denominator zero inside the domain."""

    exit_code = 2

    def __init__(self, message, roots=()):
        super().__init__(message, points=[root.location for root in roots])
        self.roots = tuple(roots)


class VerificationFailure(NumericalError):
    """One or more verification checks did not pass."""

    def __init__(self, message, reports=()):
        super().__init__(message)
        self.reports = tuple(reports)


class OutputError(IsospecError, OSError):
    """An artifact could not be written."""

    exit_code = 4
