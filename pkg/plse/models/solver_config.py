"""
Solver Configuration
Step-size, tolerance and continuation parameters of the LCA solver
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from plse.config import SOLVER_DEFAULTS


class StepRule(str, Enum):
    """How the proximal gradient step t_* is chosen"""
    FIXED = "fixed"
    BACKTRACKING = "backtracking"


class InnerSolver(str, Enum):
    ISTA = "ista"
    FISTA = "fista"


class ScheduleKind(str, Enum):
    """Penalty-level continuation used by fit_lca"""
    BLEND = "blend"
    PROPORTIONAL = "proportional"
    NONE = "none"


class SolverConfig(BaseModel):
    """Configuration of the inner proximal gradient and the outer LCA loop"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    inner_max_iters: int = Field(default=SOLVER_DEFAULTS["inner_max_iters"], ge=1)
    inner_tol: float = Field(default=SOLVER_DEFAULTS["inner_tol"], gt=0)
    outer_max_iters: int = Field(default=SOLVER_DEFAULTS["outer_max_iters"], ge=1)
    outer_tol: float = Field(default=SOLVER_DEFAULTS["outer_tol"], gt=0)
    step_rule: StepRule = StepRule.BACKTRACKING
    lipschitz_estimate: Optional[float] = Field(default=None, gt=0)
    backtracking_shrink: float = Field(default=SOLVER_DEFAULTS["backtracking_shrink"], gt=0, lt=1)
    inner_solver: InnerSolver = InnerSolver.FISTA
    schedule: ScheduleKind = ScheduleKind.BLEND
    continuation_theta: float = Field(default=SOLVER_DEFAULTS["continuation_theta"], gt=0, lt=1)
    schedule_steps: Optional[int] = Field(default=None, ge=0, description="t*; derived from p when unset")
    objective_trace: bool = True
