"""
Simulation Service
Synthetic problem generation and the Monte-Carlo replication harness
"""

from concurrent.futures import ThreadPoolExecutor
import os
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import structlog

from plse.config import get_settings
from plse.exceptions import PLSEError
from plse.models.problem import Problem, normalize_columns
from plse.models.scenario import DesignKind, ExperimentReport, ReplicationRecord, ScenarioSpec
from plse.models.solver_config import SolverConfig
from plse.penalties.levels import universal_lambda
from plse.penalties.sorted_penalty import PenaltySpec
from plse.services.diagnostics_service import error_metrics
from plse.services.solver_service import fit_lca, oracle_lse

logger = structlog.get_logger()
settings = get_settings()

# l_inf distance under which a fit counts as equal to the oracle LSE
ORACLE_MATCH_TOL = 1e-3

SUMMARY_QUANTILES = (0.25, 0.5, 0.75)


def replication_rng(seed: int, replication_index: int) -> np.random.Generator:
    """
    Independent stream per replication

    Philox is counter based; SeedSequence([seed, index]) spawns a distinct
    key per replication, so streams do not depend on execution order.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, replication_index])))


def _draw_design(spec: ScenarioSpec, rng: np.random.Generator) -> np.ndarray:
    noise = rng.standard_normal((spec.n, spec.p))
    if spec.design.kind is DesignKind.IID_GAUSSIAN:
        return noise
    # stationary AR(1) across columns: corr(x_j, x_k) = rho^|j-k|
    rho = spec.design.rho
    innovation = np.sqrt(1.0 - rho * rho)
    design = np.empty_like(noise)
    design[:, 0] = noise[:, 0]
    for j in range(1, spec.p):
        design[:, j] = rho * design[:, j - 1] + innovation * noise[:, j]
    return design


def signal_unit(spec: ScenarioSpec) -> float:
    """Universal level lambda_* the signal amplitudes are measured in (sigma = 1 when noiseless)"""
    return universal_lambda(spec.sigma if spec.sigma > 0 else 1.0, spec.n, spec.p)


def generate_problem(spec: ScenarioSpec, replication_index: int) -> Tuple[Problem, np.ndarray, List[int]]:
    """
    Draw (problem, beta_star, support) for one replication

    Columns are rescaled to ||x_j||^2 = n. Signals occupy the first s
    coordinates (random positions with randomize_support) with signs +, -, +, ...
    """
    rng = replication_rng(spec.seed, replication_index)
    X = normalize_columns(_draw_design(spec, rng))

    if spec.randomize_support:
        support = np.sort(rng.choice(spec.p, size=spec.s, replace=False))
    else:
        support = np.arange(spec.s)
    unit = signal_unit(spec)
    amplitudes = np.concatenate(
        [np.full(group.count, group.amplitude * unit) for group in spec.signal] or [np.empty(0)]
    )
    signs = np.where(np.arange(spec.s) % 2 == 0, 1.0, -1.0)
    beta_star = np.zeros(spec.p)
    beta_star[support] = signs * amplitudes

    y = X @ beta_star + spec.sigma * rng.standard_normal(spec.n)
    return Problem(X=X, y=y), beta_star, support.tolist()


class ExperimentRunner:
    """
    Monte-Carlo harness comparing penalties on one scenario

    Every replication x penalty cell is fitted and measured against both
    beta_star ("truth") and the oracle LSE on the true support ("oracle").
    Solver errors are recorded per cell.
    """

    def __init__(
        self,
        scenario: ScenarioSpec,
        penalty_specs: Sequence[PenaltySpec],
        config: Optional[SolverConfig] = None,
        names: Optional[Sequence[str]] = None,
    ):
        self.logger = logger.bind(service="simulation")
        self.scenario = scenario
        self.penalty_specs = list(penalty_specs)
        self.config = config or SolverConfig()
        self.names = list(names) if names is not None else [
            f"{spec.family.kind.value}-{index}" for index, spec in enumerate(self.penalty_specs)
        ]
        if len(self.names) != len(self.penalty_specs) or len(set(self.names)) != len(self.names):
            raise PLSEError("penalty names must be unique, one per penalty", {"names": self.names})
        for spec in self.penalty_specs:
            if spec.p != scenario.p:
                raise PLSEError("penalty dimension does not match the scenario", {"spec": spec.p, "p": scenario.p})

    def run_replication(self, replication_index: int) -> List[ReplicationRecord]:
        problem, beta_star, support = generate_problem(self.scenario, replication_index)
        try:
            oracle = oracle_lse(problem, support)
        except PLSEError as exc:
            self.logger.warning("oracle_unavailable", replication=replication_index, error=exc.message)
            oracle = None

        records = []
        for name, spec in zip(self.names, self.penalty_specs):
            try:
                fit = fit_lca(problem, spec, self.config)
            except (PLSEError, ArithmeticError, np.linalg.LinAlgError) as exc:
                self.logger.error("fit_failed", replication=replication_index, penalty=name, error=str(exc))
                records.append(ReplicationRecord(replication=replication_index, penalty=name, error=str(exc)))
                continue

            references = {"truth": beta_star}
            if oracle is not None:
                references["oracle"] = oracle
            try:
                metrics = {
                    reference: error_metrics(
                        problem, fit.beta_hat, target, support, spec.levels, self.scenario.s
                    ).scalar_items()
                    for reference, target in references.items()
                }
            except PLSEError as exc:
                self.logger.error("metrics_failed", replication=replication_index, penalty=name, error=str(exc))
                records.append(ReplicationRecord(replication=replication_index, penalty=name, error=str(exc)))
                continue
            records.append(
                ReplicationRecord(
                    replication=replication_index,
                    penalty=name,
                    metrics=metrics,
                    linf_to_oracle=None if oracle is None else float(np.max(np.abs(fit.beta_hat - oracle), initial=0.0)),
                    converged=fit.converged,
                    outer_iterations=fit.outer_iterations,
                )
            )
        self.logger.info("replication_finished", replication=replication_index)
        return records

    def run(self, threads: Optional[int] = None) -> ExperimentReport:
        workers = threads if threads is not None else settings.PLSE_THREADS
        workers = workers or os.cpu_count() or 1
        self.logger.info(
            "experiment_started", replications=self.scenario.replications, penalties=self.names, workers=workers
        )
        # map keeps replication order whatever the completion order
        with ThreadPoolExecutor(max_workers=workers) as executor:
            batches = list(executor.map(self.run_replication, range(self.scenario.replications)))
        records = [record for batch in batches for record in batch]
        return ExperimentReport(
            scenario=self.scenario,
            penalties=self.names,
            records=records,
            summary=summarize_records(records),
        )


def records_to_frame(records: Sequence[ReplicationRecord]) -> pd.DataFrame:
    """Flat table: one row per replication x penalty x reference x metric"""
    rows = []
    for record in records:
        for reference, values in record.metrics.items():
            for metric, value in values.items():
                rows.append((record.replication, record.penalty, reference, metric, value))
        if record.linf_to_oracle is not None:
            matched = float(record.linf_to_oracle <= ORACLE_MATCH_TOL)
            rows.append((record.replication, record.penalty, "oracle", "linf", record.linf_to_oracle))
            rows.append((record.replication, record.penalty, "oracle", "oracle_match", matched))
    return pd.DataFrame(rows, columns=["replication", "penalty", "reference", "metric", "value"])


def summarize_records(records: Sequence[ReplicationRecord]) -> List[Dict[str, Any]]:
    """Quartiles, mean and count of every (penalty, reference, metric); oracle_match's mean is the match fraction"""
    frame = records_to_frame(records)
    if frame.empty:
        return []
    grouped = frame.groupby(["penalty", "reference", "metric"], sort=True)["value"]
    summary = grouped.quantile(list(SUMMARY_QUANTILES)).unstack()
    summary.columns = ["q1", "median", "q3"]
    summary["mean"] = grouped.mean()
    summary["count"] = grouped.size()
    rows = summary.reset_index().to_dict(orient="records")
    return [{key: value.item() if hasattr(value, "item") else value for key, value in row.items()} for row in rows]


def report_to_frame(report: ExperimentReport) -> pd.DataFrame:
    return records_to_frame(report.records)


def report_to_payload(report: ExperimentReport) -> Dict[str, Any]:
    return report.model_dump(mode="json")


def run_experiment(
    scenario: ScenarioSpec,
    penalty_specs: Sequence[PenaltySpec],
    config: Optional[SolverConfig] = None,
    names: Optional[Sequence[str]] = None,
    threads: Optional[int] = None,
) -> ExperimentReport:
    """Run every replication of the scenario against every penalty"""
    return ExperimentRunner(scenario, penalty_specs, config, names).run(threads)
