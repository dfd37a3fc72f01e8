"""
SortedPLSE Penalties
Univariate families, level schedules and sorted specifications
"""

from plse.penalties.base_penalty import PenaltyFamily, PenaltyKind
from plse.penalties.l1_penalty import L1Penalty
from plse.penalties.mcp_penalty import MCPPenalty
from plse.penalties.scad_penalty import SCADPenalty
from plse.penalties.spike_slab_penalty import SpikeSlabPenalty
from plse.penalties.levels import (
    continuation_levels,
    proportional_levels,
    sorted_dual_norm,
    sorted_lambda_sequence,
    universal_lambda,
)
from plse.penalties.sorted_penalty import (
    PenaltySpec,
    family_from_payload,
    levels_from_payload,
    sorted_penalty_value,
)


def penalty_value(family: PenaltyFamily, t, lam):
    """rho(t; lambda) for any family"""
    return family.value(t, lam)


def penalty_derivative(family: PenaltyFamily, t, lam):
    """sgn(t) rho'(|t|; lambda); raises at t = 0"""
    return family.derivative(t, lam)


def subgradient_interval(family: PenaltyFamily, t: float, lam: float):
    """Sub-differential of rho(.; lambda) at t as a closed interval"""
    return family.subgradient_interval(t, lam)


__all__ = [
    "PenaltyFamily",
    "PenaltyKind",
    "L1Penalty",
    "MCPPenalty",
    "SCADPenalty",
    "SpikeSlabPenalty",
    "PenaltySpec",
    "penalty_value",
    "penalty_derivative",
    "subgradient_interval",
    "sorted_penalty_value",
    "sorted_lambda_sequence",
    "universal_lambda",
    "sorted_dual_norm",
    "continuation_levels",
    "proportional_levels",
    "family_from_payload",
    "levels_from_payload",
]
