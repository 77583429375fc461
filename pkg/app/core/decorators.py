"""
Decorators for long-running operations
"""
import time
from functools import wraps
from typing import Callable

import structlog

from app.core.metrics import operation_duration

logger = structlog.get_logger()


def log_duration(operation: str):
    """
    Log the wall time of the wrapped call and observe it in the duration histogram.

    Args:
        operation: Label used for the log event and the histogram
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                elapsed = time.perf_counter() - start
                operation_duration.labels(operation=operation).observe(elapsed)
                logger.info("Operation finished", operation=operation, seconds=round(elapsed, 4))

        return wrapper
    return decorator
