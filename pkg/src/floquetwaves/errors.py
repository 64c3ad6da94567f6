"""Exception types shared across the package."""


class FloquetWavesError(Exception):
    """Base class for all errors raised by this package."""


class InvalidModulationError(FloquetWavesError):
    """The modulation sampler returned a non-finite value."""


class PositivityError(FloquetWavesError):
    """The sampled modulation is not strictly positive."""


class NeedsMoreCoefficientsError(FloquetWavesError):
    """A Toeplitz matrix was requested beyond the cached coefficient order."""


class InvalidDegreeError(FloquetWavesError):
    """Spatial basis degree below 1."""


class DomainError(FloquetWavesError):
    """Evaluation point outside the reference interval [-1, 1]."""


class DimensionMismatchError(FloquetWavesError):
    """Harmonic vectors or matrices of incompatible shapes."""


class NearResonanceError(FloquetWavesError):
    """Forced solve attempted too close to a resonant quasi-frequency.

    Carries the estimated condition number in ``condition``.
    """

    def __init__(self, message, condition):
        super().__init__(message)
        self.condition = condition


class UnsupportedVariantError(FloquetWavesError):
    """A formulation variant is not available for the requested boundary condition."""


class SizeLimitError(FloquetWavesError):
    """Dense eigenproblem dimension exceeds the configured limit."""


class NumericError(FloquetWavesError):
    """An underlying dense linear-algebra routine failed to converge."""


class ModeNotFoundError(FloquetWavesError):
    """No eigenvalue within the requested radius of the target."""


class ConfigMismatchError(FloquetWavesError):
    """A mode was produced by a different problem configuration."""
