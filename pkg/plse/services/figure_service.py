"""
Figure Service
Plot-ready curves for the LCA majorization and the proximal mappings of MCP
"""

from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd

from plse.config import FIGURE_CONFIG, get_settings
from plse.exceptions import PenaltyDomainError
from plse.penalties.mcp_penalty import MCPPenalty
from plse.services.prox_service import prox_univariate

settings = get_settings()


def figure_grid(bounds: Tuple[float, float], step: Optional[float] = None) -> np.ndarray:
    """Evenly spaced grid including both bounds"""
    step = step or settings.FIGURE_GRID_STEP
    lo, hi = bounds
    if not step > 0 or hi <= lo:
        raise PenaltyDomainError("grid needs lo < hi and a positive step", {"bounds": bounds, "step": step})
    return np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)


def _mcp(lam: float, kappa: float) -> MCPPenalty:
    if not kappa > 0:
        raise PenaltyDomainError("MCP curves need kappa > 0", {"kappa": kappa})
    if lam < 0:
        raise PenaltyDomainError("penalty level must be nonnegative", {"lambda": lam})
    return MCPPenalty(kappa_bar=kappa)


def soft_threshold(x: np.ndarray, level: float) -> np.ndarray:
    return np.sign(x) * np.maximum(np.abs(x) - level, 0.0)


def firm_threshold(x: np.ndarray, lam: float, kappa: float) -> np.ndarray:
    """prox of the unconvexified MCP at unit step, defined for kappa < 1"""
    if kappa >= 1:
        raise PenaltyDomainError("MCP prox at unit step needs kappa < 1", {"kappa": kappa})
    magnitude = np.abs(x)
    return np.sign(x) * np.minimum(magnitude, np.maximum(magnitude - lam, 0.0) / (1.0 - kappa))


def figure_one_curves(b: np.ndarray, lam: float, kappa: float, b_old: float) -> Dict[str, np.ndarray]:
    """
    MCP, its LLA line and its LCA majorizer at b_old

    lla = rho(|b_old|) + rho'(|b_old|)(|b| - |b_old|)
    lca = rho_+(b) - b kappa b_old - (rho_+(b_old) - kappa b_old^2 - rho(b_old)),
    which simplifies to rho(b) + kappa (b - b_old)^2 / 2.
    """
    family = _mcp(lam, kappa)
    b = np.asarray(b, dtype=float)
    anchor = abs(b_old)
    penalty = np.asarray(family.value(b, np.full(b.shape, lam)))
    level = float(family.value(anchor, lam))
    slope = float(family.magnitude_derivative(anchor, lam))
    return {
        "penalty": penalty,
        "lla": level + slope * (np.abs(b) - anchor),
        "lca": penalty + 0.5 * kappa * (b - b_old) ** 2,
    }


def figure_one_frame(
    lam: float = FIGURE_CONFIG["lambda"],
    kappa: float = FIGURE_CONFIG["kappa"],
    b_old: float = FIGURE_CONFIG["b_old"],
    step: Optional[float] = None,
) -> pd.DataFrame:
    """Curves on b in [-4, 4] plus the proximal maps of the penalty, its LLA and its LCA"""
    grid = figure_grid(FIGURE_CONFIG["figure_1_range"], step)
    curves = figure_one_curves(grid, lam, kappa, b_old)
    family = _mcp(lam, kappa)
    lla_level = float(family.magnitude_derivative(abs(b_old), lam))
    # (x - b)^2/2 + kappa (b - b_old)^2/2 = (x + kappa b_old - b)^2/2 + kappa b^2/2 + const
    prox_lca = np.array([prox_univariate(x + kappa * b_old, family, lam, 1.0, kappa) for x in grid])
    return pd.DataFrame(
        {
            "b": grid,
            "penalty": curves["penalty"],
            "lla": curves["lla"],
            "lca": curves["lca"],
            "prox_penalty": firm_threshold(grid, lam, kappa),
            "prox_lla": soft_threshold(grid, lla_level),
            "prox_lca": prox_lca,
        }
    )


def figure_two_frame(
    lam: float = FIGURE_CONFIG["lambda"],
    kappa: float = FIGURE_CONFIG["kappa"],
    step: Optional[float] = None,
) -> pd.DataFrame:
    """Penalties (l1, MCP, convexified MCP) and their proximal maps on x in [-6, 6]"""
    grid = figure_grid(FIGURE_CONFIG["figure_2_range"], step)
    family = _mcp(lam, kappa)
    levels = np.full(grid.shape, lam)
    return pd.DataFrame(
        {
            "x": grid,
            "pen_l1": lam * np.abs(grid),
            "pen_mcp": family.value(grid, levels),
            "pen_lca": family.convexified_value(grid, levels),
            "prox_l1": soft_threshold(grid, lam),
            "prox_mcp": firm_threshold(grid, lam, kappa),
            "prox_lca": np.array([prox_univariate(x, family, lam, 1.0, kappa) for x in grid]),
        }
    )
