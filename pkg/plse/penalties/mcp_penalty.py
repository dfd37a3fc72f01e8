"""
MCP Penalty
Minimax concave penalty rho(t; lambda) = int_0^|t| (lambda - kappa x)_+ dx
"""

from typing import Literal

import numpy as np

from plse.penalties.base_penalty import PenaltyFamily, PenaltyKind


class MCPPenalty(PenaltyFamily):
    """
    MCP with maximum concavity kappa_bar

    Value is lambda|t| - kappa t^2/2 up to |t| = lambda/kappa and the constant
    lambda^2/(2 kappa) beyond. kappa_bar = 0 gives the l1 penalty.
    """

    kind: Literal[PenaltyKind.MCP] = PenaltyKind.MCP

    def _value_abs(self, a: np.ndarray, lam: np.ndarray) -> np.ndarray:
        k = self.kappa_bar
        if k == 0:
            return lam * a
        return np.where(k * a <= lam, lam * a - 0.5 * k * a * a, 0.5 * lam * lam / k)

    def _derivative_abs(self, a: np.ndarray, lam: np.ndarray) -> np.ndarray:
        return np.maximum(lam - self.kappa_bar * a, 0.0)
