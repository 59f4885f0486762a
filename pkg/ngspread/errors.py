"""Exception hierarchy and error classification."""

from typing import Optional


class SpectralToolkitError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidParameterError(SpectralToolkitError, ValueError):
    """An argument violates an operation's precondition."""


class SizeLimitError(InvalidParameterError):
    """An order exceeds a documented enumeration or scan bound."""

    def __init__(self, message: str, limit: Optional[int] = None):
        super().__init__(message)
        self.limit = limit


class NumericFailureError(SpectralToolkitError, ArithmeticError):
    """The eigensolver ran out of sweeps before reaching its tolerance."""

    def __init__(self, message: str, off_norm: float, sweeps: int):
        super().__init__(f"{message} (off_norm={off_norm:.3e}, sweeps={sweeps})")
        self.off_norm = off_norm
        self.sweeps = sweeps


EXIT_OK = 0
EXIT_NUMERIC_FAILURE = 1
EXIT_USAGE = 2
EXIT_FINDING = 3


def classify_error(error: BaseException) -> str:
    """Classify error type for exit-code and status mapping."""
    if isinstance(error, SizeLimitError):
        return "size_limit"
    elif isinstance(error, InvalidParameterError):
        return "invalid_parameter"
    elif isinstance(error, NumericFailureError):
        return "numeric_failure"
    else:
        return "unknown_error"


def exit_code_for(error: BaseException) -> int:
    """Map an error to the CLI exit code."""
    error_type = classify_error(error)
    if error_type in ("size_limit", "invalid_parameter"):
        return EXIT_USAGE
    return EXIT_NUMERIC_FAILURE
