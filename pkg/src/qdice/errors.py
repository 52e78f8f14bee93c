"""Exception hierarchy for the engine."""


class QdiceError(Exception):
    """Base class for all engine errors."""


class ConfigError(QdiceError):
    """Invalid model or run configuration; message lists every violated field."""


class CausticError(QdiceError):
    """Harmonic boundary-value solution evaluated too close to omega*t = n*pi."""


class AccuracyError(QdiceError):
    """A quadrature refinement failed to reach the requested tolerance."""


class StepSizeError(QdiceError):
    """Oracle time step violates the documented stability bound."""


class IntegratorError(QdiceError):
    """Oracle evolution drifted outside its conservation tolerances."""


class VisibilityError(QdiceError):
    """Fringe visibility undefined: diagonal peaks below the numerical floor."""


class NotReachedError(QdiceError):
    """A threshold/root was not bracketed inside the time grid.

    Carries the maximum attained value so callers can report how far the
    criterion got.
    """

    def __init__(self, message, attained=None):
        super().__init__(message)
        self.attained = attained
