"""Exception types shared across the library."""


class QRFError(Exception):
    """Base class for all library errors."""


class ConstraintViolation(QRFError):
    """A phase-space point is off the constraint or gauge surface."""


class SameFrame(QRFError):
    """A frame change was requested into the frame already in use."""


class FrameMismatch(QRFError):
    """A state's frame tag does not match the requested operation."""


class InvalidStep(QRFError):
    """Integration step size is not positive."""


class UnknownAxis(QRFError):
    """A subsystem label is not present in the state."""


class AxisClash(QRFError):
    """Two distinct subsystem axes were required but the same one was given."""


class GridMismatch(QRFError):
    """Two states do not share grids, axis order or representations."""


class TooLarge(QRFError):
    """A dense-matrix oracle was requested above the supported dimension."""


class KOutOfRange(QRFError):
    """Momentum offset is outside the grid range or not grid-commensurate."""


class NonHermitianObservable(QRFError):
    """An expectation value was requested for a non-Hermitian observable."""


class UnsupportedObservable(QRFError):
    """An observable cannot be transformed by the requested frame switch."""


class InvalidDensityMatrix(QRFError):
    """A density matrix fails hermiticity, trace or positivity checks."""


class UnknownFigure(QRFError):
    """No preset exists under the requested figure name."""


class ConfigError(QRFError):
    """An experiment configuration is missing keys or has invalid values."""


class NumericalFailure(QRFError):
    """An internal invariant gate tripped during an experiment run."""
