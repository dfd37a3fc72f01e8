"""
Prox Command
Evaluate the sorted proximal mapping of a penalty on a CSV vector
"""

from pathlib import Path

from pydantic import BaseModel, Field

from plse.penalties.sorted_penalty import PenaltySpec
from plse.services.prox_service import sorted_prox
from plse.storage.files import STDOUT, read_json, read_vector_csv, write_vector_csv

NAME = "prox"


class ProxRequest(BaseModel):
    """Request model for the prox command"""
    x_path: Path = Field(..., description="Input vector CSV, one value per line")
    penalty_path: Path = Field(..., description="PenaltySpec JSON")
    step: float = Field(default=1.0, gt=0, description="Prox step t")
    out: str = STDOUT
    header: bool = False


def run(request: ProxRequest) -> int:
    x = read_vector_csv(request.x_path, "x", request.header)
    spec = PenaltySpec.from_payload(read_json(request.penalty_path, "penalty"), x.size)
    write_vector_csv(sorted_prox(x, spec, request.step), request.out)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="sorted proximal mapping of a vector")
    parser.add_argument("--x", required=True, help="input vector CSV")
    parser.add_argument("--penalty", required=True, help="penalty JSON")
    parser.add_argument("--step", type=float, default=1.0, help="prox step (default 1)")
    parser.add_argument("--out", default=STDOUT, help="output path (default stdout)")
    parser.add_argument("--header", action="store_true", help="CSV input has a header row")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    return run(ProxRequest(x_path=args.x, penalty_path=args.penalty, step=args.step, out=args.out, header=args.header))
