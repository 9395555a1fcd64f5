"""
Retry utility for grid-resolution failures
"""
import logging
from functools import wraps
from typing import Any, Callable, Optional, Tuple, Type

from dirac.errors import DiracError, GridResolutionError


logger = logging.getLogger("DiracOscillator")


def refine_on_failure(
    max_refinements: int = 2,
    exceptions: Tuple[Type[Exception], ...] = (GridResolutionError,)
):
    """
    Decorator for retrying a grid computation on the refined grid

    The decorated function must take the grid as the keyword argument
    ``grid``; each retry replaces it by grid.refined().

    Args:
        max_refinements: Maximum number of refinements
        exceptions: Tuple of exception types to catch and retry on

    Returns:
        Decorated function
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, grid, **kwargs) -> Any:
            for attempt in range(max_refinements + 1):
                try:
                    return func(*args, grid=grid, **kwargs)

                except exceptions as e:
                    if attempt == max_refinements:
                        logger.error(
                            f"{func.__name__} failed after {max_refinements} refinements: {e}"
                        )
                        raise

                    logger.warning(
                        f"{func.__name__} on {grid} failed: {e}. Retrying on the refined grid..."
                    )
                    grid = grid.refined()

        return wrapper
    return decorator


def safe_execute(func: Callable, *args, default: Any = None,
                 exceptions: Tuple[Type[Exception], ...] = (DiracError,),
                 log_level: Optional[int] = logging.WARNING, **kwargs) -> Any:
    """
    Run a diagnostic step whose library errors must not stop the run

    Only the listed exceptions are absorbed; anything else is a bug and
    propagates.

    Args:
        func: Step to run
        *args: Positional arguments for func
        default: Value returned when func raises one of exceptions
        exceptions: Exception types to absorb
        log_level: Level of the log record for an absorbed error, None for silence
        **kwargs: Keyword arguments for func

    Returns:
        Result of func, or default
    """
    try:
        return func(*args, **kwargs)
    except exceptions as e:
        if log_level is not None:
            logger.log(log_level, f"{func.__name__} skipped: {type(e).__name__}: {e}")
        return default
