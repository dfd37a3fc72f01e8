"""
Fit Command
Fit a sorted concave PLSE from CSV inputs and write the result with diagnostics
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field
import structlog

from plse.exceptions import DimensionMismatchError, NonConvergenceError
from plse.models.problem import Problem
from plse.models.solver_config import SolverConfig
from plse.penalties.sorted_penalty import PenaltySpec
from plse.services.diagnostics_service import kkt_residual
from plse.services.solver_service import fit_lca
from plse.storage.files import STDOUT, read_json, read_matrix_csv, read_vector_csv, write_frame, write_json

logger = structlog.get_logger()

NAME = "fit"


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class FitRequest(BaseModel):
    """Request model for the fit command"""
    x_path: Path = Field(..., description="n x p design CSV")
    y_path: Path = Field(..., description="n x 1 response CSV")
    penalty_path: Path = Field(..., description="PenaltySpec JSON")
    solver_path: Optional[Path] = Field(default=None, description="SolverConfig JSON")
    out: str = Field(default=STDOUT, description="Output path, - for stdout")
    format: OutputFormat = OutputFormat.JSON
    header: bool = Field(default=False, description="CSV inputs carry one header row")
    normalize: bool = Field(default=False, description="Rescale columns to ||x_j||^2 = n before fitting")

    class Config:
        json_schema_extra = {
            "example": {
                "x_path": "data/example/X.csv",
                "y_path": "data/example/y.csv",
                "penalty_path": "data/example/penalty.json",
                "solver_path": "data/example/solver.json",
            }
        }


def fit_payload(request: FitRequest) -> Dict[str, Any]:
    """Run the fit and build the FitResult JSON with its KKT report"""
    X = read_matrix_csv(request.x_path, "x", request.header)
    y = read_vector_csv(request.y_path, "y", request.header)
    if X.shape[0] != y.shape[0]:
        raise DimensionMismatchError(
            f"x has {X.shape[0]} rows but y has {y.shape[0]}", {"x": list(X.shape), "y": y.shape[0]}
        )
    problem = Problem.from_arrays(X, y, normalize=request.normalize)
    penalty = PenaltySpec.from_payload(read_json(request.penalty_path, "penalty"), problem.p, problem.n)
    config = SolverConfig.model_validate(read_json(request.solver_path, "solver")) if request.solver_path else SolverConfig()

    result = fit_lca(problem, penalty, config)
    kkt = kkt_residual(problem, result.beta_hat, penalty)
    if request.normalize:
        # coefficients of the normalized columns back on the input scale
        scale = np.sqrt(problem.n) / np.linalg.norm(X, axis=0)
        result = result.model_copy(update={"beta_hat": result.beta_hat * scale})
    payload = result.to_payload()
    payload["kkt"] = kkt.to_payload()
    return payload


def run(request: FitRequest) -> int:
    payload = fit_payload(request)
    if request.format is OutputFormat.CSV:
        frame = pd.DataFrame({"index": np.arange(len(payload["beta"])), "beta": payload["beta"]})
        write_frame(frame, request.out)
    else:
        write_json(payload, request.out)

    if not payload["converged"]:
        raise NonConvergenceError(
            "fit stopped at outer_max_iters before convergence",
            {"outer_iterations": payload["iterations"]["outer"], "kkt_inf": payload["kkt_inf"]},
        )
    logger.info("fit_written", out=request.out, active=len(payload["active_set"]))
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="fit a sorted concave PLSE from CSV inputs")
    parser.add_argument("--x", required=True, help="design matrix CSV (n x p)")
    parser.add_argument("--y", required=True, help="response CSV (n x 1)")
    parser.add_argument("--penalty", required=True, help="penalty JSON")
    parser.add_argument("--solver", default=None, help="solver JSON (defaults when omitted)")
    parser.add_argument("--out", default=STDOUT, help="output path (default stdout)")
    parser.add_argument("--format", default="json", choices=[f.value for f in OutputFormat])
    parser.add_argument("--header", action="store_true", help="CSV inputs have a header row")
    parser.add_argument("--normalize", action="store_true", help="normalize columns to ||x_j||^2 = n")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    return run(
        FitRequest(
            x_path=args.x,
            y_path=args.y,
            penalty_path=args.penalty,
            solver_path=args.solver,
            out=args.out,
            format=args.format,
            header=args.header,
            normalize=args.normalize,
        )
    )
