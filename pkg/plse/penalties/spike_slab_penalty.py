"""
Spike-and-Slab Lasso Penalty
Two-point mixture of l1 penalties, rho_G(t) = -(1/r_n) log E_G exp(-r_n lambda |t|)
"""

from typing import Any, Literal

import numpy as np
from pydantic import Field, model_validator
from scipy.special import expit

from plse.penalties.base_penalty import ArrayLike, PenaltyFamily, PenaltyKind


class SpikeSlabPenalty(PenaltyFamily):
    """
    Mixture of lambda_hi |t| (weight weight_hi) and lambda_lo |t|

    The level argument of value/derivative is ignored: the levels come from
    the mixture. kappa_bar is derived as r_n (lambda_hi - lambda_lo)^2 / 4.
    """

    kind: Literal[PenaltyKind.SPIKE_SLAB] = PenaltyKind.SPIKE_SLAB
    lambda_hi: float = Field(..., gt=0)
    lambda_lo: float = Field(..., gt=0)
    r_n: float = Field(..., gt=0)
    weight_hi: float = Field(..., gt=0, lt=1, description="Mixture weight of lambda_hi")

    @model_validator(mode="before")
    @classmethod
    def _derive_concavity(cls, data: Any) -> Any:
        if isinstance(data, dict) and {"lambda_hi", "lambda_lo", "r_n"} <= data.keys():
            data = dict(data)
            spread = float(data["lambda_hi"]) - float(data["lambda_lo"])
            data["kappa_bar"] = float(data["r_n"]) * spread * spread / 4.0
        return data

    @model_validator(mode="after")
    def _check_order(self) -> "SpikeSlabPenalty":
        if self.lambda_hi < self.lambda_lo:
            raise ValueError("lambda_hi must be >= lambda_lo")
        return self

    @property
    def mixture_level(self) -> float:
        """lambda_G = E_G[lambda]"""
        return self.weight_hi * self.lambda_hi + (1.0 - self.weight_hi) * self.lambda_lo

    def level_at_zero(self, lam: ArrayLike) -> ArrayLike:
        if np.ndim(lam) == 0:
            return self.mixture_level
        return np.full(np.shape(lam), self.mixture_level)

    def max_derivative(self, lam: ArrayLike) -> ArrayLike:
        if np.ndim(lam) == 0:
            return self.lambda_hi
        return np.full(np.shape(lam), self.lambda_hi)

    def _value_abs(self, a: np.ndarray, lam: np.ndarray) -> np.ndarray:
        r = self.r_n
        log_mix = np.logaddexp(
            np.log(self.weight_hi) - r * self.lambda_hi * a,
            np.log1p(-self.weight_hi) - r * self.lambda_lo * a,
        )
        out = np.where(a == 0, 0.0, -log_mix / r)
        return np.broadcast_to(out, np.broadcast(a, lam).shape).copy()

    def _derivative_abs(self, a: np.ndarray, lam: np.ndarray) -> np.ndarray:
        # posterior weight of the lambda_hi atom given |t| = a
        spread = self.lambda_hi - self.lambda_lo
        logit = np.log(self.weight_hi) - np.log1p(-self.weight_hi) - self.r_n * spread * a
        out = self.lambda_lo + spread * expit(logit)
        return np.broadcast_to(out, np.broadcast(a, lam).shape).copy()

    def describe(self) -> dict:
        payload = super().describe()
        payload["spike_slab"] = {
            "lambda_hi": self.lambda_hi,
            "lambda_lo": self.lambda_lo,
            "r_n": self.r_n,
            "weight_hi": self.weight_hi,
        }
        return payload
