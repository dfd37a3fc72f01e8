"""
SortedPLSE - Command Line Entry Point
Sorted concave penalized least squares: fit, prox, simulate, figure
"""

import argparse
import sys
from typing import List, Optional

from pydantic import ValidationError
import structlog

from plse.commands import COMMANDS
from plse.config import configure_logging, get_settings
from plse.exceptions import PLSEError

logger = structlog.get_logger()

# Exit codes: 0 success, 1 input error, 2 non-convergence
EXIT_INPUT_ERROR = 1


class CliArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; here 2 means non-convergence"""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = CliArgumentParser(
        prog="plse",
        description="Sorted concave penalized least squares via local convex approximation",
    )
    parser.add_argument("--version", action="version", version=f"{settings.APP_NAME} {settings.APP_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def _describe_validation_error(exc: ValidationError) -> str:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first["loc"]) or "input"
    return f"{location}: {first['msg']}"


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging()

    # Global exception handler
    try:
        return args.handler(args)
    except PLSEError as exc:
        logger.error("command_failed", command=args.command, error=exc.message, details=exc.details)
        print(f"error: {exc.message}", file=sys.stderr)
        return exc.exit_code
    except ValidationError as exc:
        message = _describe_validation_error(exc)
        logger.error("invalid_input", command=args.command, error=message)
        print(f"error: {message}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except Exception as exc:
        logger.error("Unhandled exception", command=args.command, error=str(exc))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
