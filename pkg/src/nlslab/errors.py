"""Exception types shared across the package."""


class NlsLabError(Exception):
    """Base class for all package-specific errors."""


class InvalidFieldError(NlsLabError):
    """A field contains NaN/Inf entries or has the wrong size."""


class GridMismatchError(NlsLabError):
    """Two fields that must share a grid do not."""


class EnergyOverflowError(NlsLabError):
    """An energy term evaluated to a non-finite value."""


class ZeroMassError(NlsLabError):
    """An operation required a component with positive mass."""


class CapacityError(NlsLabError):
    """Combined rearrangement support exceeds the number of grid cells."""


class CollapseError(NlsLabError):
    """A flow iterate vanished identically before renormalization."""


class BlowupError(NlsLabError):
    """Time integration produced non-finite values."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class WraparoundError(NlsLabError):
    """A translation separation exceeds half the box."""


class ConfigError(NlsLabError):
    """Invalid or incomplete run configuration."""
