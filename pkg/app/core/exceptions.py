"""
Custom exceptions for the Zak ZCZ toolkit.

Exit codes follow the command-line contract: 1 for a property violation,
2 for usage or configuration errors.
"""
from typing import Optional, Dict, Any

EXIT_OK = 0
EXIT_PROPERTY_VIOLATION = 1
EXIT_USAGE = 2


class ZakToolkitError(Exception):
    """Base exception for the toolkit."""

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_USAGE,
        details: Optional[Dict[str, Any]] = None
    ):
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


class DimensionMismatchError(ZakToolkitError):
    """Raised when array shapes or sequence periods do not agree."""

    def __init__(self, message: str, expected: Any = None, actual: Any = None):
        details = {}
        if expected is not None:
            details["expected"] = expected
        if actual is not None:
            details["actual"] = actual
        super().__init__(message, details=details)


class InvalidParameterError(ZakToolkitError):
    """Raised when a precondition on construction parameters fails."""

    def __init__(self, message: str, precondition: str = "unknown", details: Optional[Dict[str, Any]] = None):
        details = details or {}
        details["precondition"] = precondition
        self.precondition = precondition
        super().__init__(message, details=details)


class FlorentineArrayError(ZakToolkitError):
    """Raised when an array is not a circular Florentine array where one is required."""

    def __init__(self, message: str, violation: Optional[Dict[str, Any]] = None):
        super().__init__(message, details={"violation": violation} if violation else None)


class SequenceFileError(ZakToolkitError):
    """Raised when a sequence, array or profile file cannot be parsed."""

    def __init__(self, message: str, path: Optional[str] = None, details: Optional[Dict[str, Any]] = None):
        details = details or {}
        if path:
            details["path"] = path
        super().__init__(message, details=details)


class ConfigurationError(ZakToolkitError):
    """Raised when a campaign configuration is invalid."""

    def __init__(self, message: str, errors: Optional[list] = None):
        super().__init__(message, details={"errors": errors or []})


class PropertyViolationError(ZakToolkitError):
    """Raised when a certified property does not hold."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=EXIT_PROPERTY_VIOLATION, details=details)
