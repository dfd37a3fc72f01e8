"""
SCAD Penalty
rho(t; lambda) = int_0^|t| {lambda - kappa (x - lambda)_+}_+ dx
"""

from typing import Literal

import numpy as np

from plse.penalties.base_penalty import PenaltyFamily, PenaltyKind


class SCADPenalty(PenaltyFamily):
    """
    SCAD in the single-concavity parameterization

    The classical SCAD parameter a maps to kappa_bar = 1/(a - 1). The
    derivative is flat at lambda on [0, lambda], then decays linearly to zero
    at lambda (1 + 1/kappa).
    """

    kind: Literal[PenaltyKind.SCAD] = PenaltyKind.SCAD

    def _value_abs(self, a: np.ndarray, lam: np.ndarray) -> np.ndarray:
        k = self.kappa_bar
        if k == 0:
            return lam * a
        excess = np.maximum(a - lam, 0.0)
        decaying = lam * a - 0.5 * k * excess * excess
        flat = lam * lam + 0.5 * lam * lam / k
        return np.where(k * excess <= lam, decaying, flat)

    def _derivative_abs(self, a: np.ndarray, lam: np.ndarray) -> np.ndarray:
        return np.maximum(lam - self.kappa_bar * np.maximum(a - lam, 0.0), 0.0)
