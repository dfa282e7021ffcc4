"""
Error Handler for Teledistill
Provides the exception hierarchy and the mapping from failures to CLI exit codes
"""
import sys
from enum import Enum
from functools import wraps
from typing import Any, Callable, Optional, Tuple

from src.constants import EXIT_CONFIG, EXIT_GUARD, EXIT_OK, EXIT_TOLERANCE, EXIT_UNKNOWN


class TeledistillError(Exception):
    """Base class for all errors raised by the library"""


class DimensionError(TeledistillError, ValueError):
    """Operands disagree in modulus, length or matrix size"""


class UnsupportedModulusError(TeledistillError, ValueError):
    """Operation needs a prime modulus"""


class ResourceGuardError(TeledistillError):
    """Refused enumeration or dense construction beyond a configured limit"""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: size {size} exceeds limit {limit}")
        self.what = what
        self.size = size
        self.limit = limit


class InvalidInputError(TeledistillError, ValueError):
    """Invalid user input; `field` names the offending entry when known"""

    def __init__(self, message: str, field: Optional[str] = None):
        prefix = f"{field}: " if field else ""
        super().__init__(f"{prefix}{message}")
        self.field = field


class NotSelfOrthogonalError(InvalidInputError):
    """Stabilizer basis contains a pair with nonzero symplectic form"""

    def __init__(self, pair: Tuple[int, int], value: int):
        super().__init__(
            f"basis vectors {pair[0]} and {pair[1]} have symplectic form {value} != 0",
            field="stabilizer_basis",
        )
        self.pair = pair
        self.value = value


class ToleranceFailure(TeledistillError):
    """A numerical check exceeded its tolerance"""

    def __init__(self, check: str, gap: float, tol: float):
        super().__init__(f"{check}: observed gap {gap:.3e} exceeds tolerance {tol:.1e}")
        self.check = check
        self.gap = gap
        self.tol = tol


class ErrorType(Enum):
    """Classification of failures for exit codes"""
    CONFIG = "config"
    GUARD = "guard"
    TOLERANCE = "tolerance"
    UNKNOWN = "unknown"


class ErrorHandler:
    """Centralized error handling for the command line"""

    ERROR_MESSAGES = {
        ErrorType.CONFIG: "Configuration error: check the command flags and input files.",
        ErrorType.GUARD: "Resource guard: the requested size is beyond desk scale.",
        ErrorType.TOLERANCE: "Check failed: a numerical identity was violated.",
        ErrorType.UNKNOWN: "Unexpected error.",
    }

    EXIT_CODES = {
        ErrorType.CONFIG: EXIT_CONFIG,
        ErrorType.GUARD: EXIT_GUARD,
        ErrorType.TOLERANCE: EXIT_TOLERANCE,
        ErrorType.UNKNOWN: EXIT_UNKNOWN,
    }

    @staticmethod
    def classify_error(error: Exception) -> ErrorType:
        """Classify an exception

        Args:
            error: The exception to classify

        Returns:
            ErrorType classification
        """
        if isinstance(error, ResourceGuardError):
            return ErrorType.GUARD
        if isinstance(error, ToleranceFailure):
            return ErrorType.TOLERANCE
        if isinstance(error, (InvalidInputError, DimensionError, UnsupportedModulusError,
                              FileNotFoundError)):
            return ErrorType.CONFIG
        return ErrorType.UNKNOWN

    @classmethod
    def exit_code(cls, error: Optional[Exception]) -> int:
        if error is None:
            return EXIT_OK
        return cls.EXIT_CODES[cls.classify_error(error)]

    @classmethod
    def describe(cls, error: Exception) -> str:
        """User-facing message: category text followed by the exception detail"""
        return f"{cls.ERROR_MESSAGES[cls.classify_error(error)]} {error}"

    @classmethod
    def with_error_boundary(cls, operation_name: str = "operation"):
        """Decorator turning exceptions of a CLI command into an exit code.

        The wrapped function returns an int exit code on success; any
        exception is logged and mapped through `exit_code`.
        """
        def decorator(func: Callable[..., int]) -> Callable[..., int]:
            @wraps(func)
            def wrapper(*args: Any, **kwargs: Any) -> int:
                try:
                    return func(*args, **kwargs)
                except Exception as e:
                    from src.verbose_logger import get_logger
                    error_type = cls.classify_error(e)
                    if isinstance(e, ResourceGuardError):
                        get_logger().log_guard(e.what, e.size, e.limit)
                    get_logger().log_error(
                        cls.describe(e),
                        context=operation_name,
                        include_traceback=error_type is ErrorType.UNKNOWN,
                    )
                    print(cls.describe(e), file=sys.stderr)
                    return cls.exit_code(e)
            return wrapper
        return decorator
