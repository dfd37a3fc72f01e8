"""
Simulation Models
Scenario specification and Monte-Carlo experiment records
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from plse.config import SCENARIO_DEFAULTS


class DesignKind(str, Enum):
    """Law of the rows of X"""
    IID_GAUSSIAN = "iid_gaussian"
    AR1 = "ar1"


class DesignSpec(BaseModel):
    kind: DesignKind = DesignKind(SCENARIO_DEFAULTS["design"]["kind"])
    rho: float = Field(default=SCENARIO_DEFAULTS["design"]["rho"], gt=-1.0, lt=1.0)


class SignalGroup(BaseModel):
    """count coefficients of size amplitude x universal lambda_*"""
    count: int = Field(..., ge=0)
    amplitude: float


class ScenarioSpec(BaseModel):
    """Synthetic regression scenario; signal groups split the support into strong/weak parts"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(default=SCENARIO_DEFAULTS["n"], ge=2)
    p: int = Field(default=SCENARIO_DEFAULTS["p"], ge=2)
    s: int = Field(default=SCENARIO_DEFAULTS["s"], ge=0)
    design: DesignSpec = DesignSpec()
    signal: Optional[List[SignalGroup]] = None
    sigma: float = Field(default=SCENARIO_DEFAULTS["sigma"], ge=0.0)
    seed: int = Field(default=SCENARIO_DEFAULTS["seed"], ge=0, lt=2**64)
    replications: int = Field(default=SCENARIO_DEFAULTS["replications"], ge=1)
    randomize_support: bool = False

    @model_validator(mode="before")
    @classmethod
    def _default_signal(cls, data: Any) -> Any:
        # all-strong signal when no groups are given
        if isinstance(data, dict) and data.get("signal") is None:
            data = dict(data)
            data["signal"] = [{"count": data.get("s", SCENARIO_DEFAULTS["s"]), "amplitude": 10.0}]
        return data

    @model_validator(mode="after")
    def _check_support(self) -> "ScenarioSpec":
        total = sum(group.count for group in self.signal)
        if total != self.s:
            raise ValueError(f"signal counts sum to {total}, expected s = {self.s}")
        if self.s > self.p:
            raise ValueError("s must not exceed p")
        return self


class ReplicationRecord(BaseModel):
    """One replication x penalty cell"""
    replication: int
    penalty: str
    metrics: Dict[str, Dict[str, float]] = {}
    linf_to_oracle: Optional[float] = None
    converged: bool = False
    outer_iterations: int = 0
    error: Optional[str] = None


class ExperimentReport(BaseModel):
    """Monte-Carlo report; records are ordered by (replication, penalty)"""
    scenario: ScenarioSpec
    penalties: List[str]
    records: List[ReplicationRecord]
    summary: List[Dict[str, Any]]
