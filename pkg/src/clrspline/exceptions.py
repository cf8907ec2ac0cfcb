"""Exception hierarchy shared by all clrspline modules."""


class ClrSplineError(Exception):
    """Base class for every error raised by this package."""


class InvalidConfigError(ClrSplineError, ValueError):
    """Knot configuration or spline degree is not admissible."""


class InvalidOrderError(ClrSplineError, ValueError):
    """Derivative / penalty order outside the supported range."""


class DomainError(ClrSplineError, ValueError):
    """Argument outside the domain of a function (abscissa, log of non-positive)."""


class DimensionError(ClrSplineError, ValueError):
    """Array shapes do not agree."""


class InvalidInputError(ClrSplineError, ValueError):
    """Non-finite or otherwise unusable numeric input."""


class IngestError(ClrSplineError, ValueError):
    """A data file could not be parsed into a dataset."""
