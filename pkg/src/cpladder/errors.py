"""Exception hierarchy shared by all modules."""


class CPLadderError(Exception):
    """Base class for every error raised by :mod:`cpladder`."""


class ShapeError(CPLadderError, ValueError):
    pass


class DivisionByZeroAtBasePoint(CPLadderError, ZeroDivisionError):
    pass


class InvalidDimension(CPLadderError, ValueError):
    pass


class ParseError(CPLadderError, ValueError):
    """Malformed seed file. ``location`` names the offending line or field."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class ZeroVectorError(CPLadderError, ArithmeticError):
    pass


class DegenerateSeedError(CPLadderError):
    def __init__(self, message, rung=None):
        self.rung = rung
        super().__init__(message)


class LadderEndError(CPLadderError):
    pass


class InvalidProjectorError(CPLadderError, ValueError):
    pass


class SpectralPoleError(CPLadderError, ArithmeticError):
    pass


class RungError(CPLadderError, IndexError):
    pass


class InconsistentSurfaceError(CPLadderError, ValueError):
    pass


class DegenerateMetricError(CPLadderError, ArithmeticError):
    pass


class QuadratureError(CPLadderError, RuntimeError):
    """Adaptive quadrature gave up; ``value`` and ``error`` hold the partial result."""

    def __init__(self, message, value=None, error=None):
        self.value = value
        self.error = error
        super().__init__(message)


class ConfigError(CPLadderError, ValueError):
    pass


class IntegerSnapError(CPLadderError, ArithmeticError):
    """A topological integral is farther than the snap tolerance from an integer."""
