"""
Penalty Level Schedules
Universal and sorted penalty levels, continuation schedules and the sorted dual norm
"""

import math
from typing import Tuple

import numpy as np

from plse.exceptions import DimensionMismatchError, PenaltyDomainError


def universal_lambda(sigma: float, n: int, p: int, eta: float = 1.0) -> float:
    """
    Universal penalty level lambda_* = (sigma/eta) sqrt((2/n) log p)

    The accepted range is (0, 1], not the open interval: eta = 1 is the
    default and gives the plain level sigma sqrt((2/n) log p), e.g. 0.30349
    for sigma = 1, n = p = 100. eta <= 0 and eta > 1 raise PenaltyDomainError.
    """
    if not 0.0 < eta <= 1.0:
        raise PenaltyDomainError("eta must lie in (0, 1]", {"eta": eta})
    if p < 2:
        raise PenaltyDomainError("universal level needs p >= 2", {"p": p})
    if n < 1 or sigma <= 0:
        raise PenaltyDomainError("need n >= 1 and sigma > 0", {"n": n, "sigma": sigma})
    return (sigma / eta) * math.sqrt(2.0 * math.log(p) / n)


def sorted_lambda_sequence(p: int, n: int, sigma: float, A0: float, alpha: float) -> np.ndarray:
    """
    Sorted levels lambda_{*,j} = A0 sigma sqrt((2/n) log(p / (alpha j))), j = 1..p

    Strictly decreasing, and every entry is at least A0 sigma sqrt((2/n) log(1/alpha)).
    """
    if not 0.0 < alpha < 1.0:
        raise PenaltyDomainError("alpha must lie in (0, 1)", {"alpha": alpha})
    if p < 1 or n < 1:
        raise PenaltyDomainError("need p >= 1 and n >= 1", {"p": p, "n": n})
    if sigma <= 0 or A0 <= 0:
        raise PenaltyDomainError("need sigma > 0 and A0 > 0", {"sigma": sigma, "A0": A0})
    j = np.arange(1, p + 1, dtype=float)
    return A0 * sigma * np.sqrt((2.0 / n) * np.log(p / (alpha * j)))


def continuation_levels(base_levels: np.ndarray, theta: float, t: int) -> Tuple[np.ndarray, float]:
    """
    Step t of the Lasso-to-sorted continuation

    Returns max(lambda_{*,j}, theta^t lambda_{*,1}) and the l1 blend weight theta^t.
    """
    if not 0.0 < theta < 1.0:
        raise PenaltyDomainError("theta must lie in (0, 1)", {"theta": theta})
    base = np.asarray(base_levels, dtype=float)
    weight = theta ** t
    return np.maximum(base, weight * base[0]), weight


def proportional_levels(base_levels: np.ndarray, start_scale: float, theta: float, t: int) -> np.ndarray:
    """Proportional schedule A^(t) lambda_* with A^(t) = max(1, A^(0) theta^t)"""
    if not 0.0 < theta < 1.0:
        raise PenaltyDomainError("theta must lie in (0, 1)", {"theta": theta})
    scale = max(1.0, start_scale * theta ** t)
    return scale * np.asarray(base_levels, dtype=float)


def sorted_dual_norm(b: np.ndarray, levels: np.ndarray, s: int) -> float:
    """
    ||b||_{#,s} = sum_j (lambda_{s+j} / lambda_{s+1}) b_j^#

    b has length p - s; the weights are at most one.
    """
    b = np.asarray(b, dtype=float)
    levels = np.asarray(levels, dtype=float)
    p = levels.shape[0]
    if not 0 <= s < p:
        raise PenaltyDomainError("need 0 <= s < p", {"s": s, "p": p})
    if b.shape != (p - s,):
        raise DimensionMismatchError(
            "vector length must equal p - s", {"length": b.shape[0] if b.ndim else 0, "expected": p - s}
        )
    reference = levels[s]
    if reference <= 0:
        raise PenaltyDomainError("reference level lambda_{s+1} must be positive", {"s": s})
    weights = levels[s:] / reference
    magnitudes = np.sort(np.abs(b))[::-1]
    return float(np.dot(weights, magnitudes))
