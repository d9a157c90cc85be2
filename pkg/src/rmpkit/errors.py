"""Exception types raised by rmpkit."""


class RmpkitError(Exception):
    """Base class for all toolkit errors."""


class NonRegularWavevector(RmpkitError):
    """A wavevector component (or its self-dot) is too small for a rational operator."""


class ZeroTemporalComponent(RmpkitError):
    """The fourth wavevector component vanishes where it is used as a divisor."""


class NonSpatialWavevector(RmpkitError):
    """A purely spatial gauge function was requested with a time-dependent wavevector."""


class ClusterFailure(RmpkitError):
    """An eigenvalue could not be assigned to one of the expected clusters."""


class SingularGram(RmpkitError):
    pass


class SingularSystem(RmpkitError):
    pass


class TemplateMismatch(RmpkitError):
    """A transformed antisymmetric tensor no longer fits the three-parameter pattern."""

    def __init__(self, message, deviation=None):
        super().__init__(message)
        self.deviation = deviation


class DegenerateDirection(RmpkitError):
    pass


class ConfigError(RmpkitError):
    pass
