"""
Diagnostics Service
KKT residuals, explicit solution conditions, split approximation-error bound and error metrics
"""

from typing import Iterable, List, Optional, Tuple

import numpy as np
from scipy.optimize import isotonic_regression

from plse.exceptions import DimensionMismatchError, PenaltyDomainError, UnsortedInputError
from plse.models.problem import Problem
from plse.models.results import ErrorMetrics, KktReport, SupportRecovery
from plse.penalties.levels import sorted_dual_norm
from plse.penalties.sorted_penalty import LEVEL_ORDER_SLACK, PenaltySpec

# Slack used for the per-coordinate box check of constant-level penalties
BOX_CHECK_SLACK = 1e-12


def _tie_groups(values: np.ndarray) -> List[Tuple[int, int]]:
    """[lo, hi) ranges of equal entries in a sorted vector, only groups of size >= 2"""
    groups = []
    lo = 0
    for hi in range(1, values.size + 1):
        if hi == values.size or values[hi] != values[lo]:
            if hi - lo > 1:
                groups.append((lo, hi))
            lo = hi
    return groups


def _project_permutahedron(z: np.ndarray, vertex: np.ndarray) -> np.ndarray:
    """
    Euclidean projection of z onto the convex hull of all permutations of vertex

    With z sorted non-increasing by sigma, the projection is
    z - v[sigma^-1] where v is the non-increasing isotonic fit of z_sigma - vertex_sorted.
    """
    order = np.argsort(-z, kind="stable")
    target = z[order] - np.sort(vertex)[::-1]
    fitted = isotonic_regression(target, increasing=False).x
    out = np.empty_like(z)
    out[order] = z[order] - fitted
    return out


def project_subgradient(g: np.ndarray, b: np.ndarray, spec: PenaltySpec) -> np.ndarray:
    """
    Nearest member of the sub-differential of the sorted penalty at b to g

    Nonzero coordinates, ranked by |b| (ties by index), carry
    sgn(b_j) rho'(|b_j|; lambda_rank). Coordinates tied in |b| may take any
    convex combination of their rank assignments, so that group is projected
    onto the permutahedron of its derivative values. Zero coordinates get
    boxes from the remaining levels, largest box to largest |g_j|.
    """
    g = np.asarray(g, dtype=float)
    b = np.asarray(b, dtype=float)
    if g.shape != (spec.p,) or b.shape != (spec.p,):
        raise DimensionMismatchError(
            "gradient and coefficients must match the level vector", {"g": g.shape, "b": b.shape, "p": spec.p}
        )
    magnitudes = np.abs(b)
    projection = np.empty_like(g)

    nonzero = np.flatnonzero(magnitudes > 0)
    ranked = nonzero[np.argsort(-magnitudes[nonzero], kind="stable")]
    active = ranked.size
    signs = np.sign(b[ranked])
    derivatives = np.asarray(spec.rank_derivative(magnitudes[ranked], spec.levels[:active]), dtype=float)
    projection[ranked] = signs * derivatives
    for lo, hi in _tie_groups(magnitudes[ranked]):
        members = ranked[lo:hi]
        # work in the sign-adjusted frame where the group's values are the derivatives
        aligned = signs[lo:hi] * g[members]
        projection[members] = signs[lo:hi] * _project_permutahedron(aligned, derivatives[lo:hi])

    zeros = np.flatnonzero(magnitudes == 0)
    if zeros.size:
        widths = np.asarray(spec.rank_level_at_zero(spec.levels[active:]), dtype=float)
        by_gradient = zeros[np.argsort(-np.abs(g[zeros]), kind="stable")]
        projection[by_gradient] = np.clip(g[by_gradient], -widths, widths)
    return projection


def kkt_residual(
    problem: Problem,
    b: np.ndarray,
    spec: PenaltySpec,
    tilt: Optional[np.ndarray] = None,
    convexify_kappa: float = 0.0,
) -> KktReport:
    """
    Violation of the estimating equation X^T(y - Xb)/n in dPen(b)

    With tilt and convexify_kappa the residual is taken for the LCA
    subproblem L(b) - tilt^T b + Pen(b) + convexify_kappa ||b||^2/2, i.e.
    g = X^T(y - Xb)/n + tilt - convexify_kappa b is projected instead.
    """
    b = problem.check_coefficients(b)
    if spec.p != problem.p:
        raise DimensionMismatchError("penalty dimension does not match the design", {"spec": spec.p, "p": problem.p})
    g = problem.correlation(b)
    if tilt is not None:
        g = g + np.asarray(tilt, dtype=float)
    if convexify_kappa:
        g = g - convexify_kappa * b
    residual = g - project_subgradient(g, b, spec)
    box_check = None
    if spec.is_constant:
        box_check = np.abs(residual) <= BOX_CHECK_SLACK * (1.0 + np.abs(g))
    return KktReport.from_residual(residual, box_check)


def check_explicit_conditions(
    problem: Problem,
    b: np.ndarray,
    lam: float,
    kappa_star: float,
    slack: float = 0.0,
) -> np.ndarray:
    """
    Per-coordinate truth of (lambda - kappa_* |b_j|)_+ <= sgn(b_j) x_j^T(y - Xb)/n <= lambda,
    and |x_j^T(y - Xb)/n| <= lambda where b_j = 0
    """
    b = problem.check_coefficients(b)
    g = problem.correlation(b)
    nonzero = b != 0
    aligned = np.sign(b) * g
    lower = np.maximum(lam - kappa_star * np.abs(b), 0.0)
    active_ok = (lower <= aligned + slack) & (aligned <= lam + slack)
    zero_ok = np.abs(g) <= lam + slack
    return np.where(nonzero, active_ok, zero_ok)


def check_split_bound(
    residual: np.ndarray,
    levels: np.ndarray,
    s: int,
    eta1: float,
    r2: float,
) -> bool:
    """
    Sufficient decomposition nu = nu_1 + nu_2 of the approximation error

    nu_1 clips the sorted |nu| at eta1 lambda_j; the bound holds when
    ||nu_2||_2 + eta1 ||lambda_{1:s}||_2 <= lambda_{s+1} r2.
    """
    residual = np.asarray(residual, dtype=float)
    levels = np.asarray(levels, dtype=float)
    if residual.shape != levels.shape or levels.ndim != 1:
        raise DimensionMismatchError("residual and levels must have equal length", {"residual": residual.shape, "levels": levels.shape})
    if np.any(np.diff(levels) > LEVEL_ORDER_SLACK):
        raise UnsortedInputError("levels must be non-increasing")
    if not 0 <= s < levels.size:
        raise PenaltyDomainError("need 0 <= s < p", {"s": s, "p": levels.size})
    if not 0.0 < eta1 < 1.0 or r2 < 0:
        raise PenaltyDomainError("need eta1 in (0, 1) and r2 >= 0", {"eta1": eta1, "r2": r2})
    reference = levels[s]
    if reference <= 0:
        raise PenaltyDomainError("reference level lambda_{s+1} must be positive", {"s": s})

    magnitudes = np.sort(np.abs(residual))[::-1]
    remainder = magnitudes - np.minimum(magnitudes, eta1 * levels)
    return bool(np.linalg.norm(remainder) + eta1 * np.linalg.norm(levels[:s]) <= reference * r2)


def error_metrics(
    problem: Problem,
    b_hat: np.ndarray,
    b_ref: np.ndarray,
    true_support: Iterable[int],
    levels: np.ndarray,
    s: int,
    q: Optional[float] = None,
) -> ErrorMetrics:
    """Errors of b_hat against b_ref; sorted_l1 is the sorted dual norm of the off-support error"""
    b_hat = problem.check_coefficients(b_hat)
    b_ref = problem.check_coefficients(b_ref)
    support = np.unique(np.asarray(list(true_support), dtype=int))
    if support.size != s:
        raise DimensionMismatchError("true support size must equal s", {"support": support.size, "s": s})
    diff = b_hat - b_ref
    fitted = problem.X @ diff

    off_support = np.delete(diff, support)
    sorted_l1 = sorted_dual_norm(off_support, levels, s) if s < problem.p else 0.0

    lq = None
    if q is not None:
        if q <= 0:
            raise PenaltyDomainError("q must be positive", {"q": q})
        lq = (float(q), float(np.sum(np.abs(diff) ** q) ** (1.0 / q)))

    selected = set(np.flatnonzero(b_hat).tolist())
    truth = set(support.tolist())
    recovery = SupportRecovery(
        true_positives=len(selected & truth),
        false_positives=len(selected - truth),
        sign_agreement=bool(np.array_equal(np.sign(b_hat), np.sign(b_ref))),
    )
    return ErrorMetrics(
        prediction=float(fitted @ fitted) / problem.n,
        l1=float(np.sum(np.abs(diff))),
        l2=float(np.linalg.norm(diff)),
        lq=lq,
        sorted_l1=sorted_l1,
        support_recovery=recovery,
    )
