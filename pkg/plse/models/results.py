"""
Result Models
Fit results, KKT reports and error metrics with their JSON payloads
"""

from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class InnerReport(BaseModel):
    """Outcome of one inner proximal gradient solve"""
    iterations: int
    residual_inf: float
    step: float
    converged: bool


class KktReport(BaseModel):
    """
    Distance from the gradient to the sub-differential of the penalty

    residual_vector is the gradient minus its nearest member of the
    sub-differential.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    residual_vector: np.ndarray
    inf_norm: float = Field(ge=0)
    l2_norm: float = Field(ge=0)
    per_coordinate_box_check: Optional[np.ndarray] = None

    @classmethod
    def from_residual(cls, residual: np.ndarray, box_check: Optional[np.ndarray] = None) -> "KktReport":
        residual = np.asarray(residual, dtype=float)
        return cls(
            residual_vector=residual,
            inf_norm=float(np.max(np.abs(residual))) if residual.size else 0.0,
            l2_norm=float(np.linalg.norm(residual)),
            per_coordinate_box_check=box_check,
        )

    def to_payload(self) -> Dict[str, Any]:
        return {
            "residual": self.residual_vector.tolist(),
            "inf_norm": self.inf_norm,
            "l2_norm": self.l2_norm,
            "box_check": None if self.per_coordinate_box_check is None else self.per_coordinate_box_check.tolist(),
        }

    @classmethod
    def from_payload(cls, payload: Dict[str, Any]) -> "KktReport":
        box = payload.get("box_check")
        return cls(
            residual_vector=np.asarray(payload["residual"], dtype=float),
            inf_norm=payload["inf_norm"],
            l2_norm=payload["l2_norm"],
            per_coordinate_box_check=None if box is None else np.asarray(box, dtype=bool),
        )


class FitResult(BaseModel):
    """
    Output of fit_lca / fit_lasso

    objective_trace holds the penalized objective under the final penalty for
    the post-schedule iterations and is non-increasing; schedule_trace holds
    the objective under each changing schedule penalty.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    beta_hat: np.ndarray
    objective_trace: List[float] = []
    schedule_trace: List[float] = []
    kkt_residual_inf: float = Field(ge=0)
    kkt_residual_l2: float = Field(ge=0)
    inner_iterations: List[int] = []
    schedule_iterations: int = 0
    outer_iterations: int = 0
    converged: bool = False

    @field_validator("beta_hat", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return np.asarray(value, dtype=float)

    @property
    def active_set(self) -> List[int]:
        return np.flatnonzero(self.beta_hat).tolist()

    def to_payload(self) -> Dict[str, Any]:
        return {
            "beta": self.beta_hat.tolist(),
            "objective_trace": list(self.objective_trace),
            "schedule_trace": list(self.schedule_trace),
            "kkt_inf": self.kkt_residual_inf,
            "kkt_l2": self.kkt_residual_l2,
            "iterations": {
                "outer": self.outer_iterations,
                "schedule": self.schedule_iterations,
                "inner": list(self.inner_iterations),
            },
            "converged": self.converged,
            "active_set": self.active_set,
        }

    @classmethod
    def from_payload(cls, payload: Dict[str, Any]) -> "FitResult":
        iterations = payload.get("iterations", {})
        return cls(
            beta_hat=payload["beta"],
            objective_trace=payload.get("objective_trace", []),
            schedule_trace=payload.get("schedule_trace", []),
            kkt_residual_inf=payload["kkt_inf"],
            kkt_residual_l2=payload.get("kkt_l2", 0.0),
            inner_iterations=iterations.get("inner", []),
            schedule_iterations=iterations.get("schedule", 0),
            outer_iterations=iterations.get("outer", 0),
            converged=payload.get("converged", False),
        )


class SupportRecovery(BaseModel):
    true_positives: int
    false_positives: int
    sign_agreement: bool


class ErrorMetrics(BaseModel):
    """Prediction, coefficient and selection errors of an estimate against a reference"""

    prediction: float = Field(ge=0)
    l1: float = Field(ge=0)
    l2: float = Field(ge=0)
    lq: Optional[Tuple[float, float]] = None
    sorted_l1: float = Field(ge=0)
    support_recovery: SupportRecovery

    def scalar_items(self) -> Dict[str, float]:
        """Flat numeric view used by experiment tables"""
        items = {
            "prediction": self.prediction,
            "l1": self.l1,
            "l2": self.l2,
            "sorted_l1": self.sorted_l1,
            "true_positives": float(self.support_recovery.true_positives),
            "false_positives": float(self.support_recovery.false_positives),
            "sign_agreement": float(self.support_recovery.sign_agreement),
        }
        if self.lq is not None:
            items[f"l{self.lq[0]:g}"] = self.lq[1]
        return items
