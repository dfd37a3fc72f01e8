"""
L1 Penalty
rho(t; lambda) = lambda |t|, the Lasso penalty
"""

from typing import Literal

import numpy as np
from pydantic import Field

from plse.penalties.base_penalty import PenaltyFamily, PenaltyKind


class L1Penalty(PenaltyFamily):
    """Convex l1 penalty, kappa_bar = 0"""

    kind: Literal[PenaltyKind.L1] = PenaltyKind.L1
    kappa_bar: float = Field(default=0.0, ge=0.0, le=0.0)

    def _value_abs(self, a: np.ndarray, lam: np.ndarray) -> np.ndarray:
        return lam * a

    def _derivative_abs(self, a: np.ndarray, lam: np.ndarray) -> np.ndarray:
        return lam * np.ones_like(a)
