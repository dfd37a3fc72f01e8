"""
Figure Command
Plot-ready CSV data for the LCA majorization (1) and the MCP proximal maps (2)
"""

from typing import Literal

from pydantic import BaseModel, Field

from plse.config import FIGURE_CONFIG
from plse.services.figure_service import figure_one_frame, figure_two_frame
from plse.storage.files import STDOUT, write_frame

NAME = "figure"


class FigureRequest(BaseModel):
    """Request model for the figure command"""
    which: Literal[1, 2]
    lam: float = Field(default=FIGURE_CONFIG["lambda"], ge=0)
    kappa: float = Field(default=FIGURE_CONFIG["kappa"], gt=0)
    b_old: float = FIGURE_CONFIG["b_old"]
    out: str = STDOUT


def run(request: FigureRequest) -> int:
    if request.which == 1:
        frame = figure_one_frame(request.lam, request.kappa, request.b_old)
    else:
        frame = figure_two_frame(request.lam, request.kappa)
    write_frame(frame, request.out)
    return 0


def register(subparsers) -> None:
    parser = subparsers.add_parser(NAME, help="curve data for the MCP figures")
    parser.add_argument("--which", type=int, required=True, choices=[1, 2])
    parser.add_argument("--lambda", dest="lam", type=float, default=FIGURE_CONFIG["lambda"])
    parser.add_argument("--kappa", type=float, default=FIGURE_CONFIG["kappa"])
    parser.add_argument("--b-old", dest="b_old", type=float, default=FIGURE_CONFIG["b_old"])
    parser.add_argument("--out", default=STDOUT, help="output path (default stdout)")
    parser.set_defaults(handler=handle)


def handle(args) -> int:
    return run(FigureRequest(which=args.which, lam=args.lam, kappa=args.kappa, b_old=args.b_old, out=args.out))
