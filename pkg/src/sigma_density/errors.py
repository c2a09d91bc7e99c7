"""Exception types shared across the package."""


class SigmaDensityError(Exception):
    """Base class for all package-specific errors."""


class DomainError(SigmaDensityError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class PrecisionError(SigmaDensityError, ArithmeticError):
    """The requested tolerance is below the achievable precision floor,
    or a certified sign test could not be resolved at the floor."""


class IndeterminateError(SigmaDensityError, ArithmeticError):
    """A decision straddles a bracket boundary and cannot be certified
    either way at the working tolerance."""


class CapacityError(SigmaDensityError):
    """A requested enumeration would exceed the configured memory budget."""

    def __init__(self, message: str, suggested_bound: int | None = None):
        super().__init__(message)
        self.suggested_bound = suggested_bound
