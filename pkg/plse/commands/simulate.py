"""
Simulate Command
Monte-Carlo comparison of penalties on a synthetic scenario
"""

from enum import Enum
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field

from plse.exceptions import InputDataError
from plse.models.scenario import ScenarioSpec
from plse.models.solver_config import SolverConfig
from plse.penalties.sorted_penalty import PenaltySpec
from plse.services.simulation_service import report_to_frame, report_to_payload, run_experiment
from plse.storage.files import STDOUT, read_json, write_frame, write_json

NAME = "simulate"


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class SimulateRequest(BaseModel):
    """Request model for the simulate command"""
    scenario_path: Path = Field(..., description="ScenarioSpec JSON")
    penalties_path: Path = Field(..., description="JSON list of PenaltySpec objects, optional name per entry")
    solver_path: Optional[Path] = None
    out: str = STDOUT
    format: ReportFormat = ReportFormat.JSON
    threads: Optional[int] = Field(default=None, ge=0, description="Worker threads, 0 = one per CPU")


def run(request: SimulateRequest) -> int:
    scenario = ScenarioSpec.model_validate(read_json(request.scenario_path, "scenario"))
    entries = read_json(request.penalties_path, "penalties")
    if not isinstance(entries, list) or not entries:
        raise InputDataError("penalties must be a non-empty JSON list", field="penalties")
    specs = [PenaltySpec.from_payload(entry, scenario.p, scenario.n) for entry in entries]
    names = [entry.get("name") or f"{spec.family.kind.value}-{index}" for index, (entry, spec) in enumerate(zip(entries, specs))]
    config = SolverConfig.model_validate(read_json(request.solver_path, "solver")) if request.solver_path else SolverConfig()

    report = run_experiment(scenario, specs, config, names=names, threads=request.threads)
    if request.format is ReportFormat.CSV:
        write_frame(report_to_frame(report), request.out)
    else:
        write_json(report_to_payload(report), request.out)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="Monte-Carlo experiment over penalties")
    parser.add_argument("--scenario", required=True, help="scenario JSON")
    parser.add_argument("--penalties", required=True, help="JSON list of penalties")
    parser.add_argument("--solver", default=None, help="solver JSON (defaults when omitted)")
    parser.add_argument("--out", default=STDOUT, help="output path (default stdout)")
    parser.add_argument("--format", default="json", choices=[f.value for f in ReportFormat])
    parser.add_argument("--threads", type=int, default=None, help="worker threads (default PLSE_THREADS)")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    return run(
        SimulateRequest(
            scenario_path=args.scenario,
            penalties_path=args.penalties,
            solver_path=args.solver,
            out=args.out,
            format=args.format,
            threads=args.threads,
        )
    )
