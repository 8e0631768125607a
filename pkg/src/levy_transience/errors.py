"""Exception types shared across the package."""


class LevyTransienceError(Exception):
    """Base class for all package errors."""


class ConfigurationError(LevyTransienceError):
    """Invalid model or run configuration (bad grid, bad parameters, bad file)."""


class ModelInvariantError(LevyTransienceError):
    """A structural model invariant is violated (e.g. alpha outside (0,2))."""


class DegenerateModelError(LevyTransienceError):
    """The symbol vanishes identically or on a set where the tests need it positive."""


class QuadratureError(LevyTransienceError):
    """A quadrature failed to meet its tolerance; carries the partial value."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class DivergentIntegralError(QuadratureError):
    """An integral required to be finite was detected as divergent."""


class LevyMeasureError(LevyTransienceError):
    """The jump measure violates a Levy-measure integrability condition."""


class NotApplicableError(LevyTransienceError):
    """A test's hypotheses are not met; carries an optional witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonPowerTailError(LevyTransienceError):
    """Tail of a density is not power-like; index fit is inconclusive."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class EstimateRefusedError(LevyTransienceError):
    """A Monte Carlo estimate was refused (e.g. censoring fraction too high)."""
