"""
Sorted Penalty Specification
Multivariate penalties sum_j rho(b_j^#; lambda_j), optionally blended with l1
"""

from typing import Any, Dict, Optional, Type

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from plse.exceptions import DimensionMismatchError, InputDataError
from plse.penalties.base_penalty import PenaltyFamily, PenaltyKind
from plse.penalties.l1_penalty import L1Penalty
from plse.penalties.levels import sorted_lambda_sequence, universal_lambda
from plse.penalties.mcp_penalty import MCPPenalty
from plse.penalties.scad_penalty import SCADPenalty
from plse.penalties.spike_slab_penalty import SpikeSlabPenalty

# Slack for the non-increasing check on level vectors
LEVEL_ORDER_SLACK = 1e-12

FAMILY_TYPES: Dict[PenaltyKind, Type[PenaltyFamily]] = {
    PenaltyKind.L1: L1Penalty,
    PenaltyKind.MCP: MCPPenalty,
    PenaltyKind.SCAD: SCADPenalty,
    PenaltyKind.SPIKE_SLAB: SpikeSlabPenalty,
}


class PenaltySpec(BaseModel):
    """
    Full multivariate penalty

    Pen(b) = w lambda_1 ||b||_1 + (1 - w) sum_j rho(b_j^#; lambda_j)
    with w = l1_blend_weight. Levels are validated once here and trusted
    afterwards.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family: PenaltyFamily
    levels: np.ndarray
    l1_blend_weight: float = Field(default=0.0, ge=0.0, le=1.0)

    @field_validator("levels", mode="before")
    @classmethod
    def _validate_levels(cls, value: Any) -> np.ndarray:
        levels = np.array(value, dtype=float)
        if levels.ndim != 1 or levels.size == 0:
            raise ValueError("levels must be a non-empty vector")
        if not np.all(np.isfinite(levels)) or np.any(levels < 0):
            raise ValueError("levels must be finite and nonnegative")
        if np.any(np.diff(levels) > LEVEL_ORDER_SLACK):
            raise ValueError("levels must be non-increasing")
        levels.setflags(write=False)
        return levels

    @property
    def p(self) -> int:
        return int(self.levels.shape[0])

    @property
    def top_level(self) -> float:
        return float(self.levels[0])

    @property
    def kappa_bar(self) -> float:
        """Concavity of the blended per-rank penalty, (1 - w) kappa_bar(rho)"""
        return (1.0 - self.l1_blend_weight) * self.family.kappa_bar

    @property
    def is_constant(self) -> bool:
        return bool(self.levels[0] == self.levels[-1])

    def rank_value(self, magnitudes: np.ndarray, levels: np.ndarray) -> np.ndarray:
        """Per-rank penalty w lambda_1 a + (1 - w) rho(a; lambda)"""
        w = self.l1_blend_weight
        return w * self.top_level * magnitudes + (1.0 - w) * np.asarray(self.family.value(magnitudes, levels))

    def rank_derivative(self, magnitudes: np.ndarray, levels: np.ndarray) -> np.ndarray:
        """Per-rank derivative for magnitudes a >= 0 (right derivative at 0)"""
        w = self.l1_blend_weight
        return w * self.top_level + (1.0 - w) * np.asarray(self.family.magnitude_derivative(magnitudes, levels))

    def rank_level_at_zero(self, levels: np.ndarray) -> np.ndarray:
        """Half-width of the subgradient box for a zero coordinate at each rank"""
        w = self.l1_blend_weight
        return w * self.top_level + (1.0 - w) * np.asarray(self.family.level_at_zero(levels), dtype=float)

    def value(self, b: np.ndarray) -> float:
        return sorted_penalty_value(b, self)

    def with_levels(self, levels: np.ndarray, l1_blend_weight: float = 0.0) -> "PenaltySpec":
        """Same family with another level vector and blend weight"""
        return PenaltySpec(family=self.family, levels=levels, l1_blend_weight=l1_blend_weight)

    def to_payload(self) -> Dict[str, Any]:
        """Serialize to the PenaltySpec JSON object"""
        payload = self.family.describe()
        if self.is_constant:
            payload["levels"] = {"kind": "constant", "lambda": float(self.levels[0])}
        else:
            payload["levels"] = {"kind": "explicit", "values": self.levels.tolist()}
        if self.l1_blend_weight:
            payload["l1_blend_weight"] = self.l1_blend_weight
        return payload

    @classmethod
    def from_payload(cls, payload: Dict[str, Any], p: int, n: Optional[int] = None) -> "PenaltySpec":
        """Build a spec for dimension p (n is needed by sorted and universal levels)"""
        if not isinstance(payload, dict):
            raise InputDataError("penalty must be a JSON object", field="penalty")
        family = family_from_payload(payload)
        levels_payload = payload.get("levels")
        if levels_payload is None:
            if family.kind is not PenaltyKind.SPIKE_SLAB:
                raise InputDataError("missing penalty levels", field="levels")
            levels = np.full(p, float(family.level_at_zero(1.0)))
        else:
            levels = levels_from_payload(levels_payload, p, n)
        return cls(
            family=family,
            levels=levels,
            l1_blend_weight=float(payload.get("l1_blend_weight", 0.0)),
        )

    def __str__(self) -> str:
        kind = "constant" if self.is_constant else "sorted"
        return f"{self.family} {kind} levels (lambda_1={self.top_level:.4g}, p={self.p})"


def sorted_penalty_value(b: np.ndarray, spec: PenaltySpec) -> float:
    """
    rho_#(b; lambda) = sum_j rho(b_j^#; lambda_j) with the optional l1 blend

    Equals the maximum over permutations k of sum_j rho(b_j; lambda_{k_j}).
    """
    b = np.asarray(b, dtype=float)
    if b.shape != (spec.p,):
        raise DimensionMismatchError(
            "coefficient vector does not match the level vector", {"length": b.size, "p": spec.p}
        )
    magnitudes = np.sort(np.abs(b))[::-1]
    return float(np.sum(spec.rank_value(magnitudes, spec.levels)))


def family_from_payload(payload: Dict[str, Any]) -> PenaltyFamily:
    """Build the penalty family from the JSON fields family/kappa_bar/spike_slab"""
    try:
        kind = PenaltyKind(payload.get("family"))
    except ValueError:
        raise InputDataError(f"unknown penalty family {payload.get('family')!r}", field="family")

    if kind is PenaltyKind.SPIKE_SLAB:
        mixture = payload.get("spike_slab")
        if not isinstance(mixture, dict):
            raise InputDataError("spike_slab family needs a spike_slab object", field="spike_slab")
        missing = {"lambda_hi", "lambda_lo", "r_n", "weight_hi"} - mixture.keys()
        if missing:
            raise InputDataError(f"spike_slab is missing {sorted(missing)}", field="spike_slab")
        return SpikeSlabPenalty(**{key: mixture[key] for key in ("lambda_hi", "lambda_lo", "r_n", "weight_hi")})

    kappa = float(payload.get("kappa_bar", 0.0))
    if kind is PenaltyKind.L1:
        return L1Penalty()
    return FAMILY_TYPES[kind](kappa_bar=kappa)


def levels_from_payload(levels: Dict[str, Any], p: int, n: Optional[int] = None) -> np.ndarray:
    """Expand a levels JSON object to a length-p vector"""
    kind = levels.get("kind") if isinstance(levels, dict) else None
    try:
        if kind == "constant":
            return np.full(p, float(levels["lambda"]))
        if kind == "explicit":
            values = np.asarray(levels["values"], dtype=float)
            if values.shape != (p,):
                raise InputDataError(
                    f"explicit levels have length {values.size}, expected {p}", field="levels.values"
                )
            return values
        if kind in ("sorted", "universal"):
            n = int(levels.get("n", n or 0))
            if n < 1:
                raise InputDataError(f"{kind} levels need the sample size n", field="levels.n")
            if kind == "sorted":
                return sorted_lambda_sequence(
                    p, n, float(levels["sigma"]), float(levels["A0"]), float(levels["alpha"])
                )
            lam = universal_lambda(float(levels["sigma"]), n, p, float(levels.get("eta", 1.0)))
            return np.full(p, lam)
    except KeyError as exc:
        raise InputDataError(f"levels object is missing {exc.args[0]!r}", field=f"levels.{exc.args[0]}")
    raise InputDataError(f"unknown levels kind {kind!r}", field="levels.kind")
