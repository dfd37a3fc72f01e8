"""
Proximal Mapping Service
Univariate and isotonic proximal mappings of convexified sorted penalties
"""

from typing import Callable, Optional, Tuple

import numpy as np
from scipy.optimize import root_scalar

from plse.exceptions import DimensionMismatchError, PenaltyDomainError, UnsortedInputError
from plse.penalties.base_penalty import PenaltyFamily, PenaltyKind
from plse.penalties.mcp_penalty import MCPPenalty
from plse.penalties.sorted_penalty import PenaltySpec

# Slack on the non-increasing check of isotonic inputs
ORDER_SLACK = 1e-12

# Absolute tolerance of the bracketed block solve
BLOCK_XTOL = 1e-14

# Cap on false-position steps of the vectorized coordinate solve
COORDINATE_MAX_STEPS = 200

# Families whose per-coordinate prox and block values have closed forms
CLOSED_FORM_KINDS = (PenaltyKind.L1, PenaltyKind.MCP)


def _check_step(step: float) -> None:
    if not step > 0:
        raise PenaltyDomainError("prox step must be positive", {"step": step})


def _check_convexity(kappa_bar: float, convexify_kappa: float) -> None:
    if convexify_kappa < kappa_bar:
        raise PenaltyDomainError(
            "convexify_kappa is below kappa_bar; the prox subproblem is not convex",
            {"kappa_bar": kappa_bar, "convexify_kappa": convexify_kappa},
        )


def _blend_terms(levels: np.ndarray, l1_blend_weight: float) -> Tuple[float, float]:
    """(shift, scale) of the per-rank penalty shift |b| + scale rho(b; lambda_j)"""
    if not 0.0 <= l1_blend_weight <= 1.0:
        raise PenaltyDomainError("l1_blend_weight must lie in [0, 1]", {"l1_blend_weight": l1_blend_weight})
    return l1_blend_weight * float(levels[0]), 1.0 - l1_blend_weight


def _check_isotonic_inputs(x: np.ndarray, levels: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    levels = np.asarray(levels, dtype=float)
    if x.ndim != 1 or levels.shape != x.shape:
        raise DimensionMismatchError("x and levels must be vectors of equal length", {"x": x.shape, "levels": levels.shape})
    if np.any(np.diff(x) > ORDER_SLACK):
        raise UnsortedInputError("iso_prox input must be sorted non-increasing; sort |x| first")
    if np.any(np.diff(levels) > ORDER_SLACK):
        raise UnsortedInputError("levels must be sorted non-increasing")
    if x.size and x[-1] < 0:
        raise PenaltyDomainError("iso_prox input must be nonnegative", {"min": float(x[-1])})
    return x, levels


def _scad_coordinate_prox(
    a: np.ndarray,
    lam: np.ndarray,
    kappa_bar: float,
    step: float,
    convexify_kappa: float,
    shift: float,
    scale: float,
) -> np.ndarray:
    """
    Coordinate prox of SCAD from its three affine stationarity pieces

    rho' is flat on [0, lam], decays on [lam, lam (1 + 1/kappa)] and is zero
    beyond; the stationarity map is increasing, so the first piece whose
    root lies left of its right breakpoint holds the solution.
    """
    mu = scale * lam
    kappa = scale * kappa_bar
    knee = lam * (1.0 + 1.0 / kappa_bar) if kappa_bar > 0 else np.full_like(lam, np.inf)
    denom = 1.0 + step * convexify_kappa
    flat = (a - step * (shift + mu)) / denom
    decaying = (a - step * (shift + mu + kappa * lam)) / (1.0 + step * (convexify_kappa - kappa))
    free = (a - step * shift) / denom
    return np.where(flat <= lam, np.maximum(flat, 0.0), np.where(decaying <= knee, decaying, free))


def _false_position_coordinate_prox(
    a: np.ndarray,
    lam: np.ndarray,
    family: PenaltyFamily,
    step: float,
    convexify_kappa: float,
    shift: float,
    scale: float,
) -> np.ndarray:
    """
    Coordinate prox of a generic family by Illinois false position, all coordinates at once

    rho' lies in [0, max_derivative], which brackets the root of the slope.
    The slope grows at least as fast as b, so |slope(b)| bounds |b - root|.
    """

    def slope(b: np.ndarray) -> np.ndarray:
        penalty_slope = shift + scale * np.asarray(family.magnitude_derivative(b, lam), dtype=float)
        return b - a + step * (penalty_slope + convexify_kappa * b)

    denom = 1.0 + step * convexify_kappa
    ceiling = np.asarray(family.max_derivative(lam), dtype=float)
    lo = np.maximum((a - step * (shift + scale * ceiling)) / denom, 0.0)
    hi = np.maximum((a - step * shift) / denom, 0.0)
    f_lo, f_hi = slope(lo), slope(hi)
    out = np.where(f_lo >= 0, lo, hi)
    pending = (f_lo < 0) & (f_hi > 0)
    moved = np.zeros(a.shape, dtype=int)
    for _ in range(COORDINATE_MAX_STEPS):
        if not np.any(pending):
            break
        gap = np.where(pending, f_hi - f_lo, 1.0)
        x = np.where(pending, (lo * f_hi - hi * f_lo) / gap, out)
        fx = slope(x)
        out = np.where(pending, x, out)
        left = pending & (fx < 0)
        right = pending & (fx >= 0)
        # Illinois: halve the stale end when the same end moves twice
        f_hi = np.where(left & (moved == -1), 0.5 * f_hi, f_hi)
        f_lo = np.where(right & (moved == 1), 0.5 * f_lo, f_lo)
        lo, f_lo = np.where(left, x, lo), np.where(left, fx, f_lo)
        hi, f_hi = np.where(right, x, hi), np.where(right, fx, f_hi)
        moved = np.where(left, -1, np.where(right, 1, moved))
        pending &= (np.abs(fx) > BLOCK_XTOL * (1.0 + x)) & (hi - lo > BLOCK_XTOL * (1.0 + hi))
    return out


def _coordinate_prox(
    a: np.ndarray,
    lam: np.ndarray,
    family: PenaltyFamily,
    step: float,
    convexify_kappa: float,
    shift: float = 0.0,
    scale: float = 1.0,
) -> np.ndarray:
    """
    argmin_{b >= 0} (a_j - b)^2/2 + step {shift b + scale rho(b; lam_j) + convexify_kappa b^2/2}

    For l1/MCP the stationarity map is the max of two increasing affine
    pieces, so the root is the min of their roots (soft threshold vs shrinkage).
    SCAD has three affine pieces; other families use false position.
    """
    if family.kind in CLOSED_FORM_KINDS:
        mu = scale * lam
        kappa = scale * family.kappa_bar
        shrink = (a - step * shift) / (1.0 + step * convexify_kappa)
        soft = (a - step * (shift + mu)) / (1.0 + step * (convexify_kappa - kappa))
        return np.maximum(np.minimum(soft, shrink), 0.0)
    if family.kind is PenaltyKind.SCAD:
        return _scad_coordinate_prox(a, lam, family.kappa_bar, step, convexify_kappa, shift, scale)
    return _false_position_coordinate_prox(a, lam, family, step, convexify_kappa, shift, scale)


def _solve_block(
    x: np.ndarray,
    lam: np.ndarray,
    family: PenaltyFamily,
    step: float,
    convexify_kappa: float,
    shift: float = 0.0,
    scale: float = 1.0,
) -> float:
    """Common value b >= 0 minimizing the convex block objective, by Brent on its slope"""
    size = x.size
    x_sum = float(np.sum(x))

    def slope(b: float) -> float:
        penalty_slope = size * shift + scale * float(np.sum(family.magnitude_derivative(b, lam)))
        return size * b - x_sum + step * (penalty_slope + size * convexify_kappa * b)

    if slope(0.0) >= 0:
        return 0.0
    upper = float(np.max(x))
    if slope(upper) <= 0:
        return upper
    return float(root_scalar(slope, bracket=(0.0, upper), method="brentq", xtol=BLOCK_XTOL).root)


def _mcp_block_value(
    x: np.ndarray,
    mu: np.ndarray,
    step: float,
    kappa: float,
    convexify_kappa: float,
    shift: float,
) -> Optional[float]:
    """
    Block value of sorted MCP from the fixed-point equation

    b = sum(x_j - t shift - t mu_j I{mu_j > kappa b}) / sum(1 + t kappa_c - t kappa I{mu_j > kappa b})

    mu is non-increasing, so the indicator selects a prefix of length m;
    every m is tried and the self-consistent candidates kept. Returns None
    when no candidate is consistent (caller falls back to the generic solve).
    """
    size = x.size
    total = float(np.sum(x)) - step * shift * size
    mu_prefix = np.concatenate(([0.0], np.cumsum(mu)))
    if total - step * mu_prefix[-1] <= 0:
        return 0.0

    m = np.arange(size + 1)
    numer = total - step * mu_prefix
    denom = size * (1.0 + step * convexify_kappa) - step * kappa * m
    candidates = numer / denom
    last_inside = mu[np.maximum(m - 1, 0)]
    first_outside = mu[np.minimum(m, size - 1)]
    consistent = (
        (candidates > 0)
        & ((m == 0) | (last_inside > kappa * candidates))
        & ((m == size) | (first_outside <= kappa * candidates))
    )
    accepted = candidates[consistent]
    if accepted.size == 0:
        return None
    if accepted.size == 1:
        return float(accepted[0])

    # boundary ties mu_j = kappa b: keep the smallest block objective
    family = MCPPenalty(kappa_bar=kappa)

    def objective(b: float) -> float:
        penalty = shift * b + float(np.sum(family.value(b, mu))) / size + 0.5 * convexify_kappa * b * b
        return float(0.5 * np.sum((x - b) ** 2)) + step * size * penalty

    return float(min(accepted, key=objective))


def _pool_adjacent_violators(b: np.ndarray, block_value: Callable[[int, int], float]) -> np.ndarray:
    """
    Merge blocks violating b_1 >= ... >= b_p with a stack, left to right

    After each merge the new block is re-checked against its left neighbour.
    """
    if np.all(np.diff(b) <= 0):
        return b
    starts, ends, values = [], [], []
    for j, value in enumerate(b):
        starts.append(j)
        ends.append(j + 1)
        values.append(float(value))
        while len(values) > 1 and values[-2] < values[-1]:
            end = ends.pop()
            starts.pop()
            values.pop()
            ends[-1] = end
            values[-1] = block_value(starts[-1], end)
    out = np.empty_like(b)
    for lo, hi, value in zip(starts, ends, values):
        out[lo:hi] = value
    return out


def prox_univariate(
    x: float,
    family: PenaltyFamily,
    lam: float,
    step: float,
    convexify_kappa: float,
) -> float:
    """
    argmin_b (x - b)^2/2 + step {rho(b; lam) + convexify_kappa b^2/2}

    MCP uses sgn(x) min{(|x| - t lam)_+, |x|/(1 + t kappa)} when
    convexify_kappa equals kappa_bar; SCAD and spike-and-slab are solved by
    1-D convex minimization over b >= 0 and the sign restored.
    """
    _check_step(step)
    if lam < 0:
        raise PenaltyDomainError("penalty level must be nonnegative", {"lambda": lam})
    _check_convexity(family.kappa_bar, convexify_kappa)
    magnitude = abs(float(x))
    if magnitude == 0:
        return 0.0
    b = _coordinate_prox(np.array([magnitude]), np.array([float(lam)]), family, step, convexify_kappa)[0]
    return float(np.sign(x) * b) + 0.0


def iso_prox(
    x: np.ndarray,
    levels: np.ndarray,
    family: PenaltyFamily,
    step: float,
    convexify_kappa: float,
    *,
    l1_blend_weight: float = 0.0,
) -> np.ndarray:
    """
    Isotonic proximal mapping (generic block merging)

    Minimizes sum_j {(x_j - b_j)^2/2 + step rho_+(b_j; lambda_j)} subject to
    b_1 >= ... >= b_p >= 0, starting from the per-coordinate solutions and
    replacing violating blocks by their common minimizer.

    Args:
        x: non-increasing nonnegative input
        levels: non-increasing levels
        family: penalty family rho
        step: prox step t
        convexify_kappa: quadratic added to rho, at least the effective kappa_bar
        l1_blend_weight: w in w lambda_1 |b| + (1 - w) rho(b; lambda_j)
    """
    _check_step(step)
    x, levels = _check_isotonic_inputs(x, levels)
    shift, scale = _blend_terms(levels, l1_blend_weight)
    _check_convexity(scale * family.kappa_bar, convexify_kappa)
    b = _coordinate_prox(x, levels, family, step, convexify_kappa, shift, scale)

    def block_value(lo: int, hi: int) -> float:
        return _solve_block(x[lo:hi], levels[lo:hi], family, step, convexify_kappa, shift, scale)

    return _pool_adjacent_violators(b, block_value)


def iso_prox_mcp(
    x: np.ndarray,
    levels: np.ndarray,
    step: float,
    kappa_bar: float,
    *,
    convexify_kappa: Optional[float] = None,
    l1_blend_weight: float = 0.0,
) -> np.ndarray:
    """
    Isotonic proximal mapping for sorted MCP with block values from the fixed-point equation

    kappa_bar = 0 gives the Slope (sorted l1) prox. convexify_kappa defaults
    to the effective concavity (1 - w) kappa_bar.
    """
    _check_step(step)
    x, levels = _check_isotonic_inputs(x, levels)
    shift, scale = _blend_terms(levels, l1_blend_weight)
    kappa = scale * kappa_bar
    convexify_kappa = kappa if convexify_kappa is None else convexify_kappa
    _check_convexity(kappa, convexify_kappa)
    family = MCPPenalty(kappa_bar=kappa_bar)
    b = _coordinate_prox(x, levels, family, step, convexify_kappa, shift, scale)
    mu = scale * levels

    def block_value(lo: int, hi: int) -> float:
        value = _mcp_block_value(x[lo:hi], mu[lo:hi], step, kappa, convexify_kappa, shift)
        if value is None:
            value = _solve_block(x[lo:hi], levels[lo:hi], family, step, convexify_kappa, shift, scale)
        return value

    return _pool_adjacent_violators(b, block_value)


def sorted_prox(
    x: np.ndarray,
    spec: PenaltySpec,
    step: float,
    convexify_kappa: Optional[float] = None,
) -> np.ndarray:
    """
    prox(x; step rho_{+,#}(.; lambda)) by the sign/sort reduction

    Strips signs, sorts |x| non-increasing (stable, ties by index), solves
    the isotonic problem, inverts the sort and restores signs. The result
    has sgn(b_j) = sgn(x_j) and |b_j| >= |b_k| whenever |x_j| > |x_k|.
    """
    _check_step(step)
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.p,):
        raise DimensionMismatchError("x does not match the level vector", {"length": x.size, "p": spec.p})
    convexify_kappa = spec.kappa_bar if convexify_kappa is None else convexify_kappa

    magnitudes = np.abs(x)
    order = np.argsort(-magnitudes, kind="stable")
    if spec.family.kind in CLOSED_FORM_KINDS:
        solved = iso_prox_mcp(
            magnitudes[order],
            spec.levels,
            step,
            spec.family.kappa_bar,
            convexify_kappa=convexify_kappa,
            l1_blend_weight=spec.l1_blend_weight,
        )
    else:
        solved = iso_prox(
            magnitudes[order],
            spec.levels,
            spec.family,
            step,
            convexify_kappa,
            l1_blend_weight=spec.l1_blend_weight,
        )
    out = np.empty_like(x)
    out[order] = solved
    return np.sign(x) * out + 0.0


def sorted_prox_objective(
    b: np.ndarray,
    x: np.ndarray,
    spec: PenaltySpec,
    step: float,
    convexify_kappa: Optional[float] = None,
) -> float:
    """||b - x||^2/2 + step {Pen(b) + convexify_kappa ||b||^2/2}"""
    convexify_kappa = spec.kappa_bar if convexify_kappa is None else convexify_kappa
    b = np.asarray(b, dtype=float)
    diff = b - np.asarray(x, dtype=float)
    return 0.5 * float(diff @ diff) + step * (spec.value(b) + 0.5 * convexify_kappa * float(b @ b))
