"""
Solver Service
ISTA/FISTA on the LCA-convexified objective, the LCA outer loop with
continuation, a Lasso baseline and the oracle least-squares estimator
"""

import math
from typing import Iterable, List, Optional, Tuple

import numpy as np
import structlog

from plse.config import SOLVER_DEFAULTS
from plse.exceptions import DimensionMismatchError, PenaltyDomainError, SingularDesignError, SolverDivergenceError
from plse.models.problem import Problem
from plse.models.results import FitResult, InnerReport
from plse.models.solver_config import InnerSolver, ScheduleKind, SolverConfig, StepRule
from plse.penalties.l1_penalty import L1Penalty
from plse.penalties.levels import continuation_levels, proportional_levels
from plse.penalties.sorted_penalty import PenaltySpec
from plse.services.diagnostics_service import kkt_residual
from plse.services.prox_service import sorted_prox

logger = structlog.get_logger().bind(service="solver")

# Smallest step accepted by backtracking before the solve is declared divergent
MIN_STEP = 1e-16

# Inner iterations between exact KKT residual evaluations
RESIDUAL_CHECK_EVERY = 10


def loss_gradient(problem: Problem, b: np.ndarray) -> np.ndarray:
    """Gradient of ||y - Xb||^2/(2n): -X^T(y - Xb)/n"""
    return -problem.correlation(problem.check_coefficients(b))


def penalized_objective(problem: Problem, b: np.ndarray, spec: PenaltySpec) -> float:
    """L(b) + Pen(b)"""
    b = problem.check_coefficients(b)
    return problem.loss(b) + spec.value(b)


def estimate_lipschitz(problem: Problem, iterations: int = SOLVER_DEFAULTS["power_iterations"]) -> float:
    """Largest eigenvalue of X^T X / n by power iteration from a fixed start vector"""
    X, n = problem.X, problem.n
    vector = np.linspace(1.0, 2.0, problem.p)
    vector /= np.linalg.norm(vector)
    for _ in range(iterations):
        image = X.T @ (X @ vector) / n
        norm = np.linalg.norm(image)
        if norm == 0:
            return 0.0
        vector = image / norm
    return float(vector @ (X.T @ (X @ vector))) / n


def _initial_step(problem: Problem, config: SolverConfig) -> float:
    lipschitz = config.lipschitz_estimate or estimate_lipschitz(problem)
    if lipschitz <= 0:
        # X = 0: any step is exact
        return 1.0
    if config.step_rule is StepRule.FIXED:
        return 1.0 / (SOLVER_DEFAULTS["lipschitz_margin"] * lipschitz)
    return 1.0 / lipschitz


def _run_inner(
    problem: Problem,
    tilt: np.ndarray,
    spec: PenaltySpec,
    start: np.ndarray,
    config: SolverConfig,
    accelerate: bool,
) -> Tuple[np.ndarray, InnerReport]:
    """
    Proximal gradient on L(b) - tilt^T b + Pen(b) + kappa ||b||^2/2, kappa = spec.kappa_bar

    Stops when the KKT residual of this convex subproblem is at most
    inner_tol. Each step certifies the residual through the prox optimality
    condition: ||(x - b)/t - grad(x) + grad(b)||_2 bounds it from above at
    the new iterate b from the forward point x. The exact residual is taken
    every RESIDUAL_CHECK_EVERY iterations and at exit. With accelerate the
    momentum follows t_{k+1} = (1 + sqrt(1 + 4 t_k^2))/2 and
    x^{k+1} = b^k + ((t_k - 1)/t_{k+1})(b^k - b^{k-1}).
    """
    kappa = spec.kappa_bar
    tilt = np.asarray(tilt, dtype=float)
    step = _initial_step(problem, config)
    backtracking = config.step_rule is StepRule.BACKTRACKING

    def smooth(b: np.ndarray) -> float:
        return problem.loss(b) - float(tilt @ b)

    def exact_residual(b: np.ndarray) -> float:
        return kkt_residual(problem, b, spec, tilt=tilt, convexify_kappa=kappa).inf_norm

    b_prev = np.array(start, dtype=float)
    point = b_prev.copy()
    momentum = 1.0
    residual = math.inf
    iteration = 0
    for iteration in range(1, config.inner_max_iters + 1):
        gradient = -problem.correlation(point) - tilt
        smooth_at_point = smooth(point) if backtracking else 0.0
        while True:
            forward = point - step * gradient
            candidate = sorted_prox(forward, spec, step, kappa) if np.all(np.isfinite(forward)) else forward
            if not np.all(np.isfinite(candidate)):
                logger.error("inner_divergence", step=step, iteration=iteration)
                raise SolverDivergenceError("non-finite iterate in proximal gradient", step=step)
            if not backtracking:
                break
            diff = candidate - point
            bound = smooth_at_point + float(gradient @ diff) + float(diff @ diff) / (2.0 * step)
            if smooth(candidate) <= bound + 1e-12 * max(1.0, abs(bound)):
                break
            step *= config.backtracking_shrink
            logger.debug("step_shrunk", step=step, iteration=iteration)
            if step < MIN_STEP:
                raise SolverDivergenceError("backtracking step underflow", step=step)

        certificate = (point - candidate) / step - gradient - problem.correlation(candidate) - tilt
        checkpoint = iteration % RESIDUAL_CHECK_EVERY == 0 or iteration == config.inner_max_iters
        if checkpoint or float(np.linalg.norm(certificate)) <= config.inner_tol:
            residual = exact_residual(candidate)
        else:
            residual = math.inf
        if accelerate:
            next_momentum = (1.0 + math.sqrt(1.0 + 4.0 * momentum * momentum)) / 2.0
            point = candidate + ((momentum - 1.0) / next_momentum) * (candidate - b_prev)
            momentum = next_momentum
        else:
            point = candidate
        b_prev = candidate
        if residual <= config.inner_tol:
            break

    return b_prev, InnerReport(
        iterations=iteration,
        residual_inf=residual,
        step=step,
        converged=residual <= config.inner_tol,
    )


def ista(
    problem: Problem,
    tilt: np.ndarray,
    spec: PenaltySpec,
    start: np.ndarray,
    config: Optional[SolverConfig] = None,
) -> np.ndarray:
    """Proximal gradient without momentum"""
    b, _ = _run_inner(problem, tilt, spec, problem.check_coefficients(start), config or SolverConfig(), False)
    return b


def fista(
    problem: Problem,
    tilt: np.ndarray,
    spec: PenaltySpec,
    start: np.ndarray,
    config: Optional[SolverConfig] = None,
) -> np.ndarray:
    """Accelerated proximal gradient; first extrapolation is a pure ISTA step since t_1 = 1"""
    b, _ = _run_inner(problem, tilt, spec, problem.check_coefficients(start), config or SolverConfig(), True)
    return b


def lca_tilt(spec: PenaltySpec, b_old: np.ndarray) -> np.ndarray:
    """Gradient of the quadratic concave part kappa ||b||^2/2 at b_old; Lipschitz with constant kappa_bar"""
    return spec.kappa_bar * np.asarray(b_old, dtype=float)


def lca_step(
    problem: Problem,
    b_old: np.ndarray,
    spec: PenaltySpec,
    config: Optional[SolverConfig] = None,
) -> Tuple[np.ndarray, InnerReport]:
    """
    One local convex approximation step

    Minimizes L(b) + Pen(b) + kappa ||b||^2/2 - kappa b^T b_old, the
    majorization of L + Pen touching at b_old. If the inexact inner solve
    does not lower this surrogate, b_old is kept.
    """
    config = config or SolverConfig()
    b_old = problem.check_coefficients(b_old)
    if spec.p != problem.p:
        raise DimensionMismatchError("penalty dimension does not match the design", {"spec": spec.p, "p": problem.p})
    kappa = spec.kappa_bar
    tilt = lca_tilt(spec, b_old)
    b_new, report = _run_inner(problem, tilt, spec, b_old, config, config.inner_solver is InnerSolver.FISTA)

    def surrogate(b: np.ndarray) -> float:
        return penalized_objective(problem, b, spec) + 0.5 * kappa * float(b @ b) - float(tilt @ b)

    if surrogate(b_new) > surrogate(b_old):
        logger.debug("lca_step_rejected", residual=report.residual_inf)
        return b_old.copy(), report
    return b_new, report


def default_schedule_steps(p: int, theta: float) -> int:
    """Smallest t with theta^t <= 1/log p (0 when log p <= 1)"""
    if p < 3:
        return 0
    return max(0, math.ceil(math.log(math.log(p)) / -math.log(theta)))


def schedule_penalties(problem: Problem, spec: PenaltySpec, config: SolverConfig) -> List[PenaltySpec]:
    """Penalties of the continuation steps preceding the final penalty"""
    theta = config.continuation_theta
    if config.schedule is ScheduleKind.NONE:
        return []
    if config.schedule is ScheduleKind.BLEND:
        steps = config.schedule_steps if config.schedule_steps is not None else default_schedule_steps(problem.p, theta)
        return [spec.with_levels(*continuation_levels(spec.levels, theta, t)) for t in range(steps)]

    # proportional: A^(0) large enough that the first fit is zero
    top = spec.top_level
    ceiling = float(np.max(np.abs(problem.correlation())))
    start_scale = max(1.0, ceiling / top) if top > 0 else 1.0
    if config.schedule_steps is not None:
        steps = config.schedule_steps
    else:
        steps = math.ceil(math.log(start_scale) / -math.log(theta)) if start_scale > 1.0 else 0
    return [
        spec.with_levels(proportional_levels(spec.levels, start_scale, theta, t), spec.l1_blend_weight)
        for t in range(steps)
    ]


def fit_lca(
    problem: Problem,
    spec: PenaltySpec,
    config: Optional[SolverConfig] = None,
    start: Optional[np.ndarray] = None,
) -> FitResult:
    """
    Sorted concave PLSE by LCA with continuation

    Runs one LCA step per schedule penalty (warm-started), then LCA steps
    under the final penalty until ||b^(t) - b^(t-1)||_2 <= outer_tol or
    outer_max_iters. objective_trace is L + Pen under the final penalty,
    starting at the first post-schedule iterate.
    The Lipschitz estimate is computed once and shared by every inner solve.
    """
    config = config or SolverConfig()
    if spec.p != problem.p:
        raise DimensionMismatchError("penalty dimension does not match the design", {"spec": spec.p, "p": problem.p})
    if config.lipschitz_estimate is None:
        lipschitz = estimate_lipschitz(problem)
        if lipschitz > 0:
            config = config.model_copy(update={"lipschitz_estimate": lipschitz})
    b = np.zeros(problem.p) if start is None else problem.check_coefficients(start).copy()
    log = logger.bind(n=problem.n, p=problem.p, penalty=str(spec))
    log.info("fit_started", schedule=config.schedule.value)

    schedule = schedule_penalties(problem, spec, config)
    schedule_trace: List[float] = []
    inner_iterations: List[int] = []
    for t, step_spec in enumerate(schedule):
        b, report = lca_step(problem, b, step_spec, config)
        inner_iterations.append(report.iterations)
        schedule_trace.append(penalized_objective(problem, b, step_spec))
        log.debug("schedule_step", t=t, top_level=step_spec.top_level, active=int(np.count_nonzero(b)))

    objective_trace = [penalized_objective(problem, b, spec)] if config.objective_trace else []
    converged = False
    outer = 0
    for outer in range(1, config.outer_max_iters + 1):
        b_new, report = lca_step(problem, b, spec, config)
        inner_iterations.append(report.iterations)
        change = float(np.linalg.norm(b_new - b))
        b = b_new
        if config.objective_trace:
            objective_trace.append(penalized_objective(problem, b, spec))
        if change <= config.outer_tol:
            converged = True
            break

    kkt = kkt_residual(problem, b, spec)
    log.info("fit_finished", outer_iterations=outer, converged=converged, kkt_inf=kkt.inf_norm)
    return FitResult(
        beta_hat=b,
        objective_trace=objective_trace,
        schedule_trace=schedule_trace,
        kkt_residual_inf=kkt.inf_norm,
        kkt_residual_l2=kkt.l2_norm,
        inner_iterations=inner_iterations,
        schedule_iterations=len(schedule),
        outer_iterations=outer,
        converged=converged,
    )


def fit_lasso(problem: Problem, lam: float, config: Optional[SolverConfig] = None) -> FitResult:
    """Lasso baseline: fit_lca with the l1 family at constant level lam, no schedule"""
    if not lam > 0:
        raise PenaltyDomainError("Lasso level must be positive", {"lambda": lam})
    config = (config or SolverConfig()).model_copy(update={"schedule": ScheduleKind.NONE})
    spec = PenaltySpec(family=L1Penalty(), levels=np.full(problem.p, float(lam)))
    return fit_lca(problem, spec, config)


def oracle_lse(problem: Problem, support: Iterable[int]) -> np.ndarray:
    """Least squares on the columns in support, zero elsewhere"""
    columns = np.unique(np.asarray(list(support), dtype=int))
    beta = np.zeros(problem.p)
    if columns.size == 0:
        return beta
    if columns[0] < 0 or columns[-1] >= problem.p:
        raise DimensionMismatchError("support index out of range", {"p": problem.p})
    design = problem.X[:, columns]
    if np.linalg.matrix_rank(design) < columns.size:
        raise SingularDesignError("restricted design X_S is rank deficient", {"support": columns.tolist()})
    beta[columns] = np.linalg.lstsq(design, problem.y, rcond=None)[0]
    return beta
