"""Exception types shared across the package."""


class BornreconError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(BornreconError):
    """Operands have incompatible shapes."""


class NotHermitianError(BornreconError):
    """A matrix expected to be Hermitian deviates beyond tolerance."""


class NotPositiveDefiniteError(BornreconError):
    """Hermitian factorization hit a non-positive pivot."""


class SvdFailureError(BornreconError):
    """SVD iteration failed to converge."""


class InvalidWavenumberError(BornreconError):
    """Wavenumber must be strictly positive."""


class InvalidAlphaError(BornreconError):
    """Regularization parameter must be strictly positive."""


class ConfigError(BornreconError):
    """A run configuration file is malformed or violates the schema."""


class ScenarioRunError(BornreconError):
    """A scenario failed numerically; carries the scenario name and step."""

    def __init__(self, scenario: str, step: int, cause: Exception):
        self.scenario = scenario
        self.step = step
        self.cause = cause
        super().__init__(
            f"scenario '{scenario}' failed at step {step}: {cause}"
        )
