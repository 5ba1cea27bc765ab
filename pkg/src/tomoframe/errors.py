"""Exception types shared across the toolkit."""


class TomographyError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(TomographyError):
    """Operands have incompatible shapes or lengths."""


class RangeError(TomographyError):
    """A scalar argument lies outside its allowed range."""


class StateError(TomographyError):
    """An operator violates a structural requirement (Hermiticity,
    unit trace, idempotency, or positivity)."""


class DataError(TomographyError):
    """Measurement data (probabilities, frequencies, direction vectors)
    is malformed or out of bounds."""


class SpanError(TomographyError):
    """A vector lies outside the span of a frame.

    Carries the norm of the component orthogonal to the span as
    ``residual``.
    """

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = float(residual)


class DesignError(TomographyError):
    """A direction set violates the averaging conditions required of a
    measurement design.

    Carries both condition residuals: ``first_moment_residual`` for the
    vector sum and ``second_moment_residual`` for the second-moment
    matrix.
    """

    def __init__(self, message, first_moment_residual, second_moment_residual):
        super().__init__(message)
        self.first_moment_residual = float(first_moment_residual)
        self.second_moment_residual = float(second_moment_residual)


class CompletenessError(TomographyError):
    """An operator family does not span the full operator space."""


class ConditioningError(TomographyError):
    """A Gram matrix is too ill conditioned to invert reliably.

    Carries the offending eigenvalue spectrum as ``spectrum``.
    """

    def __init__(self, message, spectrum):
        super().__init__(message)
        self.spectrum = spectrum


class FeasibilityError(TomographyError):
    """A primal or dual point violates its feasibility constraints."""


class ResourceError(TomographyError):
    """A requested construction exceeds the configured size cap."""


class ScenarioError(TomographyError):
    """A scenario file cannot be parsed or fails validation."""
