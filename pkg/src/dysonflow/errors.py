"""Exception types shared across the library."""


class DysonflowError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(DysonflowError):
    """A matrix required to be Hermitian is not, beyond tolerance."""


class NotPositiveDefinite(DysonflowError):
    """A matrix required to be positive definite is not.

    When the failure occurs inside a time series, ``t`` carries the
    offending sample time.
    """

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class NonDiagonalizable(DysonflowError):
    """Eigenvectors coalesce numerically (e.g. at an exceptional point)."""


class UnsupportedHamiltonian(DysonflowError):
    """The requested construction has no solution for this Hamiltonian."""


class PositivityViolation(DysonflowError):
    """A constructed metric fails det rho > 0."""


class PositivityLost(DysonflowError):
    """The integrated metric stopped being positive definite at time ``t``."""

    def __init__(self, t):
        super().__init__(f"metric positivity lost at t = {t:.9g}")
        self.t = t


class StepTooLarge(DysonflowError):
    """The fixed integration step exceeds the local error bound."""


class SingularDysonMap(DysonflowError):
    """A Dyson map with |det| below threshold cannot be inverted."""


class DimensionTooLarge(DysonflowError):
    """Dense chain construction refused beyond the configured site count."""


class ConfigInvalid(DysonflowError):
    """A scenario configuration failed validation."""
