import functools
import logging

from collections.abc import Callable
from typing import Any

from pydantic import ValidationError

from supermarket.utils.errors import (
    InfeasibleMomentsError,
    InvalidDistributionError,
    NumericalFailureError,
    ShapeMismatchError,
    SupermarketError,
    UnstableModelError,
)


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_BAD_INPUT = 2
EXIT_UNSTABLE = 3
EXIT_NUMERICAL = 4

EXIT_CODES: dict[type[Exception], int] = {
    InvalidDistributionError: EXIT_BAD_INPUT,
    InfeasibleMomentsError: EXIT_BAD_INPUT,
    ShapeMismatchError: EXIT_BAD_INPUT,
    ValidationError: EXIT_BAD_INPUT,
    ValueError: EXIT_BAD_INPUT,
    UnstableModelError: EXIT_UNSTABLE,
    NumericalFailureError: EXIT_NUMERICAL,
}


def exit_code_for(error: BaseException) -> int:
    """Maps an exception to a process exit code, most specific type first."""
    for klass in type(error).__mro__:
        if klass in EXIT_CODES:
            return EXIT_CODES[klass]
    return EXIT_UNEXPECTED


def cli_error_handler(func: Callable[..., int]) -> Callable[..., int]:
    """Decorator turning exceptions of a CLI entry point into exit codes."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> int:
        try:
            return func(*args, **kwargs)
        except (SupermarketError, ValueError) as e:
            code = exit_code_for(e)
            message = getattr(e, 'message', None) or str(e)
            logger.error('%s: %s', type(e).__name__, message)
            if isinstance(e, InfeasibleMomentsError) and e.diagnostics:
                logger.error('Diagnostics: %s', e.diagnostics)
            return code
        except Exception as e:
            logger.exception('Unknown error occurred %s', e)
            return EXIT_UNEXPECTED

    return wrapper
