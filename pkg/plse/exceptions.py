"""
SortedPLSE Errors
Every error carries the CLI exit code it maps to
"""

from typing import Any, Dict, Optional

import numpy as np


class PLSEError(Exception):
    """Base class for all library errors"""

    exit_code: int = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class PenaltyDomainError(PLSEError, ValueError):
    """Argument outside the domain of a penalty operation"""


class DimensionMismatchError(PLSEError, ValueError):
    """Vector or matrix shapes disagree"""


class UnsortedInputError(PLSEError, ValueError):
    """Input to an isotonic operation is not sorted non-increasing"""


class ProblemValidationError(PLSEError, ValueError):
    """Design matrix or response violates the Problem invariants"""


class SingularDesignError(PLSEError, np.linalg.LinAlgError):
    """Restricted design X_S is rank deficient"""


class SolverDivergenceError(PLSEError, ArithmeticError):
    """Non-finite iterate produced by a proximal gradient solver"""

    def __init__(self, message: str, step: float, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, {"step": step, **(details or {})})
        self.step = step


class InputDataError(PLSEError, ValueError):
    """Unreadable CSV or invalid JSON input; names the offending field"""

    def __init__(self, message: str, field: str = "", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, {"field": field, **(details or {})})
        self.field = field


class NonConvergenceError(PLSEError):
    """Fit stopped at the iteration cap"""

    exit_code = 2
