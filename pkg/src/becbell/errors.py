"""Exception hierarchy shared across the package.

The CLI maps each family onto a process exit code, so new failure modes
should subclass one of these rather than ``Exception`` directly.
"""


class BecBellError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class StructuralError(BecBellError, ValueError):
    """Malformed input: wrong shape, bad permutation, missing block."""


class ConfigError(BecBellError, ValueError):
    """Configuration file failed schema validation."""


class PhysicsError(BecBellError):
    """The requested physical situation has no steady state or no valid measurement."""

    exit_code = 2


class DomainError(PhysicsError, ValueError):
    """Argument outside the domain of a formula (non-physical CM, negative rate...)."""


class UnstableError(PhysicsError):
    """Drift matrix has an eigenvalue outside the open left half-plane."""


class DegenerateMeasurementError(PhysicsError):
    """The measured-quadrature covariance Gamma is singular."""


class ConventionError(PhysicsError):
    """A result violated the uncertainty relation; signals a convention mismatch."""


class NumericalError(BecBellError, ArithmeticError):
    """Quadrature or eigen-solve failed to reach the requested accuracy.

    Attributes:
        achieved: best error estimate reached before giving up, if known.
    """

    exit_code = 3

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved
