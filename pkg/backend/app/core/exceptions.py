"""
Exceptions - simulator error hierarchy and CLI error mapping

Every error raised on purpose by the simulator derives from SimulatorError and
carries an error code, a message and optional details. The CLI turns them into
an ErrorResponse and an exit status through `to_error_response` / `exit_code_for`.

Usage:
    >>> from app.core.exceptions import ConfigurationError, exit_code_for
    >>> try:
    ...     raise ConfigurationError("unknown link R3-R9", details={"link": "R3-R9"})
    ... except ConfigurationError as exc:
    ...     code = exit_code_for(exc)
"""

import logging
from datetime import datetime
from typing import Any, Dict, Optional

from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)


class ErrorResponse(BaseModel):
    """Error payload printed by the CLI"""
    error_code: str = Field(..., description="Stable machine-readable error code")
    message: str = Field(..., description="Human readable message")
    details: Dict[str, Any] = Field(default_factory=dict, description="Extra context")
    timestamp: str = Field(default_factory=lambda: datetime.now().isoformat())


class SimulatorError(Exception):
    """Base class for all simulator errors"""

    error_code = "SIMULATOR_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error_code": self.error_code,
            "message": self.message,
            "details": self.details,
        }


class ConfigurationError(SimulatorError):
    """Invalid scenario, topology constraints or missing configuration file"""

    error_code = "INVALID_CONFIG"


class NameParseError(SimulatorError, ValueError):
    """Malformed canonical name text"""

    error_code = "INVALID_NAME"


class SchedulingError(SimulatorError):
    """An event was scheduled before the current simulation time"""

    error_code = "CAUSALITY_VIOLATION"


class BenchmarkError(SimulatorError):
    """Invalid benchmark parameters"""

    error_code = "INVALID_BENCHMARK"


class StrategyNotFoundError(SimulatorError):
    """Requested forwarding strategy is not registered"""

    error_code = "UNKNOWN_STRATEGY"


class SweepError(SimulatorError):
    """One or more runs of a sweep failed"""

    error_code = "SWEEP_FAILED"


# ============================================================================
# CLI mapping
# ============================================================================

EXIT_CODES: Dict[type, int] = {
    ConfigurationError: 2,
    NameParseError: 2,
    StrategyNotFoundError: 2,
    BenchmarkError: 3,
    SchedulingError: 4,
    SweepError: 5,
    SimulatorError: 1,
    FileNotFoundError: 2,
}


def exit_code_for(exc: BaseException) -> int:
    """
    Exit status for an exception

    Args:
        exc: raised exception

    Returns:
        int: the most specific registered exit code, 1 for anything else
    """
    for error_type in type(exc).__mro__:
        if error_type in EXIT_CODES:
            return EXIT_CODES[error_type]
    return 1


def to_error_response(exc: BaseException) -> ErrorResponse:
    """
    Build the CLI error payload

    Args:
        exc: raised exception

    Returns:
        ErrorResponse: code, message and details
    """
    if isinstance(exc, SimulatorError):
        logger.warning(f"{exc.error_code}: {exc.message}")
        return ErrorResponse(**exc.to_dict())

    if isinstance(exc, FileNotFoundError):
        logger.warning(f"File not found: {exc}")
        return ErrorResponse(
            error_code="FILE_NOT_FOUND",
            message=str(exc),
            details={"type": type(exc).__name__},
        )

    logger.error(f"Unhandled exception: {type(exc).__name__}: {exc}", exc_info=True)
    return ErrorResponse(
        error_code="INTERNAL_ERROR",
        message="An unexpected error occurred",
        details={"error": str(exc), "type": type(exc).__name__},
    )
