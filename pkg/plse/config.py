"""
SortedPLSE Configuration
Environment settings, logging setup and default tables
"""

from functools import lru_cache
import logging
import sys

import structlog
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Runtime settings loaded from environment variables"""

    # Application
    APP_NAME: str = "SortedPLSE"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = False

    # Parallelism for `simulate` (0 = one worker per CPU)
    PLSE_THREADS: int = 0

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_JSON: bool = True

    # Figure grids
    FIGURE_GRID_STEP: float = 0.01

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()


def configure_logging(settings: Settings = None) -> None:
    """Configure structlog to write filtered events to stderr"""
    settings = settings or get_settings()
    level = logging.DEBUG if settings.DEBUG else getattr(logging, settings.LOG_LEVEL.upper(), logging.WARNING)
    renderer = (
        structlog.processors.JSONRenderer()
        if settings.LOG_JSON
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


# Solver defaults (see SolverConfig)
SOLVER_DEFAULTS = {
    "inner_max_iters": 2000,
    "inner_tol": 1e-8,
    "outer_max_iters": 200,
    "outer_tol": 1e-8,
    "continuation_theta": 0.8,
    "backtracking_shrink": 0.5,
    "power_iterations": 50,
    # Power iteration underestimates the top eigenvalue; the fixed step uses 1 / (margin * estimate)
    "lipschitz_margin": 1.01,
}


# Desk-scale simulation regime: small (s/n) log p
SCENARIO_DEFAULTS = {
    "n": 200,
    "p": 500,
    "s": 10,
    "design": {"kind": "ar1", "rho": 0.3},
    "sigma": 1.0,
    "seed": 20170419,
    "replications": 20,
}


# Figure data defaults: MCP with lambda = 1, kappa = 1/3 at b_old = 1.5
FIGURE_CONFIG = {
    "lambda": 1.0,
    "kappa": 1.0 / 3.0,
    "b_old": 1.5,
    "figure_1_range": (-4.0, 4.0),
    "figure_2_range": (-6.0, 6.0),
}
