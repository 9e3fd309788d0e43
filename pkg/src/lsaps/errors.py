"""Exception types shared across the package."""


class LsapsError(Exception):
    """Base class for all package errors."""


class InvalidSizeError(LsapsError, ValueError):
    """Input too short for the requested operation."""


class InvalidConfigError(LsapsError, ValueError):
    """Smoother or run configuration violates its constraints."""


class SingularSystemError(LsapsError, ValueError):
    """The assembled normal-equations matrix is singular."""


class NotPositiveDefiniteError(SingularSystemError):
    """A non-positive pivot was hit during banded Cholesky factorization."""


class DegenerateSignalError(LsapsError, ValueError):
    """The signal carries no curvature anywhere (perfectly affine)."""


class LeverageSaturationError(LsapsError, ValueError):
    """A leverage value reached 1; leave-one-out residuals are undefined."""


class SelectionFailedError(LsapsError, RuntimeError):
    """No candidate on the parameter grid produced a finite CV loss."""


class UndefinedMetricError(LsapsError, ValueError):
    """A quality metric is undefined for the given reference signal."""


class IngestError(LsapsError, ValueError):
    """An input spectrum file could not be parsed."""
