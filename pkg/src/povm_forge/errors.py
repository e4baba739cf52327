"""Exception hierarchy shared by all modules."""


class PovmForgeError(ValueError):
    """Base class for every error raised by this package."""


class InvalidDimensionError(PovmForgeError):
    pass


class InvalidParameterError(PovmForgeError):
    pass


class ShapeError(PovmForgeError):
    pass


class NotPSDError(PovmForgeError):
    pass


class NotIsometryError(PovmForgeError):
    pass


class NotUnitaryError(PovmForgeError):
    pass


class InvalidSeedOperatorError(PovmForgeError):
    """Raised when a Heisenberg-Weyl seed operator is not PSD with trace 1/d."""


class ResolutionError(PovmForgeError):
    """A grid cannot resolve (or contain) the requested wavefunction or kernel."""


class ResourceError(PovmForgeError):
    pass


class ConditioningError(PovmForgeError):
    pass


class InvalidPovmError(PovmForgeError):
    """Operators that are not PSD or do not sum to the identity."""
