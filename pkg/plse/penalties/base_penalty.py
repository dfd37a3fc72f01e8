"""
Base Penalty Family
Foundation for the univariate concave penalties rho(t; lambda)
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from plse.exceptions import PenaltyDomainError

ArrayLike = Union[float, np.ndarray]


class PenaltyKind(str, Enum):
    """Enum for penalty families"""
    L1 = "l1"
    MCP = "mcp"
    SCAD = "scad"
    SPIKE_SLAB = "spike_slab"


def _unwrap(out: np.ndarray, *inputs) -> ArrayLike:
    """Return a float when every input was a scalar"""
    if all(np.ndim(x) == 0 for x in inputs):
        return float(out)
    return out


class PenaltyFamily(BaseModel, ABC):
    """
    Abstract univariate penalty rho(t; lambda)

    Every family satisfies rho(0) = 0, symmetry in t, monotonicity in |t|,
    rho'(0+) = level_at_zero(lambda) and the concavity bound kappa_bar.

    Subclasses implement two magnitude kernels on a = |t| >= 0:
    - _value_abs(): closed-form rho(a; lambda)
    - _derivative_abs(): right derivative at a = 0, left derivative at kinks
    """

    model_config = ConfigDict(frozen=True)

    kind: PenaltyKind
    kappa_bar: float = Field(default=0.0, ge=0.0, description="Maximum concavity")

    @abstractmethod
    def _value_abs(self, a: np.ndarray, lam: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def _derivative_abs(self, a: np.ndarray, lam: np.ndarray) -> np.ndarray:
        pass

    def _check_levels(self, lam: ArrayLike) -> np.ndarray:
        lam_arr = np.asarray(lam, dtype=float)
        if np.any(lam_arr < 0) or np.any(np.isnan(lam_arr)):
            raise PenaltyDomainError(
                "penalty level must be nonnegative",
                {"family": self.kind.value, "lambda": np.min(lam_arr).item()},
            )
        return lam_arr

    def level_at_zero(self, lam: ArrayLike) -> ArrayLike:
        """Penalty level rho'(0+; lambda)"""
        return lam

    def max_derivative(self, lam: ArrayLike) -> ArrayLike:
        """Upper bound of |rho'(t; lambda)| over t"""
        return self.level_at_zero(lam)

    def value(self, t: ArrayLike, lam: ArrayLike) -> ArrayLike:
        """Evaluate rho(t; lambda) elementwise"""
        lam_arr = self._check_levels(lam)
        out = self._value_abs(np.abs(np.asarray(t, dtype=float)), lam_arr)
        return _unwrap(out, t, lam)

    def magnitude_derivative(self, a: ArrayLike, lam: ArrayLike) -> ArrayLike:
        """rho'(a; lambda) for magnitudes a >= 0 (right derivative at 0)"""
        lam_arr = self._check_levels(lam)
        out = self._derivative_abs(np.asarray(a, dtype=float), lam_arr)
        return _unwrap(out, a, lam)

    def derivative(self, t: ArrayLike, lam: ArrayLike) -> ArrayLike:
        """
        Single-valued derivative sgn(t) rho'(|t|; lambda)

        Raises:
            PenaltyDomainError: at t = 0, where the sub-differential is an
                interval (see subgradient_interval)
        """
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr == 0):
            raise PenaltyDomainError(
                "derivative is set-valued at t = 0; use subgradient_interval",
                {"family": self.kind.value},
            )
        lam_arr = self._check_levels(lam)
        out = np.sign(t_arr) * self._derivative_abs(np.abs(t_arr), lam_arr)
        return _unwrap(out, t, lam)

    def subgradient_interval(self, t: float, lam: float) -> Tuple[float, float]:
        """Closed interval of subgradients of rho(.; lambda) at t"""
        if t == 0:
            level = float(self.level_at_zero(self._check_levels(lam)))
            return (-level, level)
        slope = float(self.derivative(t, lam))
        return (slope, slope)

    def convexified_value(self, t: ArrayLike, lam: ArrayLike, kappa: float = None) -> ArrayLike:
        """rho_+(t; lambda) = rho(t; lambda) + kappa t^2 / 2, kappa defaults to kappa_bar"""
        kappa = self.kappa_bar if kappa is None else kappa
        t_arr = np.asarray(t, dtype=float)
        out = np.asarray(self.value(t_arr, lam)) + 0.5 * kappa * t_arr * t_arr
        return _unwrap(out, t, lam)

    def describe(self) -> dict:
        """JSON fragment for this family"""
        return {"family": self.kind.value, "kappa_bar": self.kappa_bar}

    def __str__(self) -> str:
        return f"{self.kind.value}(kappa_bar={self.kappa_bar:g})"
