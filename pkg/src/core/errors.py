"""
Domain errors for funtf-potential.

Every error raised for bad input or an unsupported request derives from
FuntfError; the CLI turns these into exit code 1 with a JSON error object.
"""

from typing import Any


class FuntfError(Exception):
    """Base class for domain errors"""

    error_type = "funtf_error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"type": self.error_type, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


class DimensionMismatchError(FuntfError, ValueError):
    error_type = "dimension_mismatch"


class UnsupportedSpaceError(FuntfError, ValueError):
    error_type = "unsupported_space"


class InvalidInputError(FuntfError, ValueError):
    error_type = "invalid_input"


class ConvergenceError(FuntfError, RuntimeError):
    error_type = "convergence_failure"


class SubsetLimitError(FuntfError, ValueError):
    error_type = "subset_limit_exceeded"


class NotSchauderFrameError(FuntfError, ValueError):
    error_type = "not_schauder_frame"


class UnsupportedConstructionError(FuntfError, ValueError):
    error_type = "unsupported_construction"
