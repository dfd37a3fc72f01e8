# Services Package
from plse.services.prox_service import iso_prox, iso_prox_mcp, prox_univariate, sorted_prox
from plse.services.diagnostics_service import (
    check_explicit_conditions,
    check_split_bound,
    error_metrics,
    kkt_residual,
    project_subgradient,
)
from plse.services.solver_service import (
    estimate_lipschitz,
    fista,
    fit_lasso,
    fit_lca,
    ista,
    lca_step,
    lca_tilt,
    loss_gradient,
    oracle_lse,
    penalized_objective,
)
from plse.services.simulation_service import ExperimentRunner, generate_problem, run_experiment
from plse.services.figure_service import figure_one_curves, figure_one_frame, figure_two_frame

__all__ = [
    "prox_univariate",
    "iso_prox",
    "iso_prox_mcp",
    "sorted_prox",
    "kkt_residual",
    "project_subgradient",
    "check_explicit_conditions",
    "check_split_bound",
    "error_metrics",
    "loss_gradient",
    "penalized_objective",
    "estimate_lipschitz",
    "ista",
    "fista",
    "lca_tilt",
    "lca_step",
    "fit_lca",
    "fit_lasso",
    "oracle_lse",
    "ExperimentRunner",
    "generate_problem",
    "run_experiment",
    "figure_one_curves",
    "figure_one_frame",
    "figure_two_frame",
]
