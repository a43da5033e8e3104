"""
Custom exceptions for db-priors.

Every failure the library can raise derives from DBPriorsError so callers (the
CLI in particular) can map whole branches of the hierarchy onto exit codes.
"""

from typing import Any, Optional


class DBPriorsError(Exception):
    """Base exception for all db-priors errors."""

    def __init__(self, message: str, cause: Optional[Exception] = None) -> None:
        """Initialize DBPriorsError.

        Args:
            message: Error message.
            cause: Optional underlying exception that caused this error.
        """
        super().__init__(message)
        self.cause = cause
        self.message = message

    def __str__(self) -> str:
        """Get string representation of the error.

        Returns:
            Error message with optional cause.
        """
        if self.cause:
            return f"{self.message} (Caused by: {str(self.cause)})"
        return self.message


class ConfigError(DBPriorsError):
    """Error in configuration loading or validation."""

    pass


class ReportError(DBPriorsError):
    """Error while writing tables, curves or JSON results."""

    pass


class ValidationError(DBPriorsError):
    """Statistics, parameters or scenario flags violate an invariant."""

    def __init__(self, message: str, field: Optional[str] = None, value: Optional[Any] = None) -> None:
        """Initialize ValidationError.

        Args:
            message: Error message.
            field: Optional field name that failed validation.
            value: Optional invalid value.
        """
        super().__init__(message)
        self.field = field
        self.value = value

    def __str__(self) -> str:
        if self.field is not None and self.value is not None:
            return f"{self.message} (Field: {self.field}, Value: {self.value})"
        if self.field is not None:
            return f"{self.message} (Field: {self.field})"
        return self.message


class UnsupportedOperationError(DBPriorsError):
    """An operation's premise does not hold for the requested family."""

    def __init__(self, message: str, family: Optional[str] = None) -> None:
        super().__init__(message)
        self.family = family

    def __str__(self) -> str:
        if self.family:
            return f"{self.message} (Family: {self.family})"
        return self.message


class PriorNotAvailableError(DBPriorsError):
    """A prior does not exist for the family, or has no closed form for it.

    Raised for the min-DB prior of families whose minimum divergence never
    becomes integrable, for the sum-DB prior of the irregular family, and for
    comparison priors without a closed form.
    """

    def __init__(self, message: str, family: Optional[str] = None, prior: Optional[str] = None) -> None:
        """Initialize PriorNotAvailableError.

        Args:
            message: Reason the prior is unavailable.
            family: Optional family identifier.
            prior: Optional prior identifier.
        """
        super().__init__(message)
        self.family = family
        self.prior = prior

    def __str__(self) -> str:
        details = [
            f"{label}: {value}"
            for label, value in (("Family", self.family), ("Prior", self.prior))
            if value
        ]
        if details:
            return f"{self.message} ({', '.join(details)})"
        return self.message


class NumericalFailure(DBPriorsError):
    """Base class for failures of the numerical machinery."""

    pass


class NumericalError(NumericalFailure):
    """NaN from an integrand or target, or a singular matrix."""

    def __init__(self, message: str, point: Optional[Any] = None) -> None:
        super().__init__(message)
        self.point = point

    def __str__(self) -> str:
        if self.point is not None:
            return f"{self.message} (Point: {self.point!r})"
        return self.message


class QuadratureError(NumericalFailure):
    """An integral did not reach the accepted tolerance."""

    def __init__(self, message: str, result: Optional[Any] = None) -> None:
        """Initialize QuadratureError.

        Args:
            message: Error message.
            result: Optional QuadratureResult carrying the diagnostics.
        """
        super().__init__(message)
        self.result = result

    def __str__(self) -> str:
        if self.result is not None:
            return (
                f"{self.message} (Value: {self.result.value:.6g}, "
                f"Abs err: {self.result.abs_err:.3g})"
            )
        return self.message


class SamplerError(NumericalFailure):
    """The Metropolis chain failed or is too short."""

    def __init__(self, message: str, ess: Optional[float] = None) -> None:
        super().__init__(message)
        self.ess = ess

    def __str__(self) -> str:
        if self.ess is not None:
            return f"{self.message} (ESS: {self.ess:.1f})"
        return self.message


class ProbeError(NumericalFailure):
    """The integrability probe refused, or contradicted an analytic tail index."""

    def __init__(self, message: str, diagnostic: Optional[str] = None) -> None:
        super().__init__(message)
        self.diagnostic = diagnostic

    def __str__(self) -> str:
        if self.diagnostic:
            return f"{self.message} (Diagnostic: {self.diagnostic})"
        return self.message
