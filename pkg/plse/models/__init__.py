"""
SortedPLSE Models
Problem, configuration and result types
"""

from plse.models.problem import Problem, normalize_columns
from plse.models.solver_config import InnerSolver, ScheduleKind, SolverConfig, StepRule
from plse.models.results import ErrorMetrics, FitResult, InnerReport, KktReport, SupportRecovery
from plse.models.scenario import (
    DesignKind,
    DesignSpec,
    ExperimentReport,
    ReplicationRecord,
    ScenarioSpec,
    SignalGroup,
)

__all__ = [
    "Problem",
    "normalize_columns",
    "SolverConfig",
    "StepRule",
    "InnerSolver",
    "ScheduleKind",
    "FitResult",
    "InnerReport",
    "KktReport",
    "ErrorMetrics",
    "SupportRecovery",
    "ScenarioSpec",
    "DesignSpec",
    "DesignKind",
    "SignalGroup",
    "ReplicationRecord",
    "ExperimentReport",
]
