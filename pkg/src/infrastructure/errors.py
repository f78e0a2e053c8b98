"""Custom exceptions for the application."""


class EntanglementGeometryError(Exception):
    """Base exception for the application."""
    pass


class ValidationError(EntanglementGeometryError, ValueError):
    """Input does not satisfy a domain invariant."""
    pass


class DimMismatchError(ValidationError):
    """Operator dimensions are incompatible or unsupported."""
    pass


class NotHermitianError(ValidationError):
    """Matrix is not Hermitian within tolerance."""
    pass


class NotUnitVectorError(ValidationError):
    """A Bloch or setting vector does not have unit length."""
    pass


class NotAStateError(ValidationError):
    """Operator is not a density matrix (trace or positivity violated)."""
    pass


class NotSeparableError(ValidationError):
    """A state required to be separable fails the PPT test."""
    pass


class ZeroDirectionError(ValidationError):
    """Two states coincide, so no direction between them exists."""
    pass


class UnknownRegionError(ValidationError):
    """Requested c-space region name is not known."""
    pass


class StateSpecError(ValidationError):
    """A CLI state or operator specification could not be parsed."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ConvergenceError(EntanglementGeometryError):
    """Solver did not reach its tolerance within the iteration cap."""
    pass


class OracleError(EntanglementGeometryError, ArithmeticError):
    """Alternating product-state optimization lost monotonicity."""
    pass
