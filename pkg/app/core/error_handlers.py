"""
Global error handlers for the command line.

Each handler logs the exception, writes a JSON error body to stderr and
returns the process exit code.
"""
import json
import sys
import traceback
from typing import Any, Dict, List, Optional, TextIO

import structlog
from pydantic import ValidationError

from app.core.exceptions import EXIT_USAGE, ConfigurationError, ZakToolkitError

logger = structlog.get_logger()


def _emit(body: Dict[str, Any], stream: Optional[TextIO]) -> None:
    (stream or sys.stderr).write(json.dumps(body, default=str) + "\n")


def format_validation_errors(exc: ValidationError) -> List[Dict[str, str]]:
    """Field/message pairs, one per invalid field."""
    errors = []
    for error in exc.errors():
        errors.append({
            "field": ".".join(str(loc) for loc in error["loc"]),
            "message": error["msg"],
            "type": error["type"]
        })
    return errors


def toolkit_exception_handler(exc: ZakToolkitError, command: str, stream: Optional[TextIO] = None) -> int:
    """Handle toolkit exceptions."""
    logger.error(
        "Toolkit exception",
        command=command,
        error=exc.message,
        exit_code=exc.exit_code,
        details=exc.details
    )
    _emit(
        {
            "error": exc.__class__.__name__,
            "message": exc.message,
            "details": exc.details,
            "command": command
        },
        stream,
    )
    return exc.exit_code


def validation_exception_handler(exc: ValidationError, command: str, stream: Optional[TextIO] = None) -> int:
    """Handle pydantic validation errors as configuration errors."""
    errors = format_validation_errors(exc)
    logger.warning("Validation error", command=command, errors=errors)
    return toolkit_exception_handler(ConfigurationError("Configuration validation failed", errors), command, stream)


def general_exception_handler(exc: Exception, command: str, stream: Optional[TextIO] = None) -> int:
    """Handle unexpected exceptions."""
    logger.error(
        "Unexpected error",
        command=command,
        error=str(exc),
        traceback=traceback.format_exc()
    )
    _emit(
        {
            "error": "InternalError",
            "message": "An unexpected error occurred",
            "command": command
        },
        stream,
    )
    return EXIT_USAGE


def handle_exception(exc: Exception, command: str, stream: Optional[TextIO] = None) -> int:
    """Dispatch ``exc`` to its handler and return the exit code."""
    if isinstance(exc, ZakToolkitError):
        return toolkit_exception_handler(exc, command, stream)
    if isinstance(exc, ValidationError):
        return validation_exception_handler(exc, command, stream)
    return general_exception_handler(exc, command, stream)
