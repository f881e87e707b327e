"""Exception types shared across the package."""


class GripperError(Exception):
    """Base class for all package-specific errors."""


class OutOfWorkspaceError(GripperError):
    """A requested pressure or aperture is not reachable.

    ``reachable`` holds the achievable (lo, hi) range when known.
    """

    def __init__(self, message, reachable=None):
        super().__init__(message)
        self.reachable = reachable


class ConvergenceError(GripperError):
    """A numerical routine failed to reach its tolerance."""


class CalibrationError(GripperError):
    """Calibration input was rejected or a fit is unusable."""


class ConfigError(GripperError):
    """Configuration file is malformed or violates an invariant."""
