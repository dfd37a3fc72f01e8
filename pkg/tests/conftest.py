"""
Shared fixtures: seeded generators, random normalized problems and reference oracles
"""

import numpy as np
import pytest

from plse.models.problem import Problem, normalize_columns


def make_problem(rng: np.random.Generator, n: int, p: int, s: int = 3, sigma: float = 0.5) -> Problem:
    """Gaussian design with ||x_j||^2 = n and a sparse signal"""
    X = normalize_columns(rng.standard_normal((n, p)))
    beta = np.zeros(p)
    beta[: min(s, p)] = rng.choice([-1.0, 1.0], size=min(s, p)) * rng.uniform(1.0, 2.0, size=min(s, p))
    y = X @ beta + sigma * rng.standard_normal(n)
    return Problem(X=X, y=y)


def coordinate_descent_lasso(problem: Problem, lam: float, tol: float = 1e-14, max_sweeps: int = 200000) -> np.ndarray:
    """Lasso by cyclic coordinate descent; columns are normalized so each update is a soft threshold"""
    X, y, n = problem.X, problem.y, problem.n
    b = np.zeros(problem.p)
    residual = y.copy()
    for _ in range(max_sweeps):
        largest = 0.0
        for j in range(problem.p):
            z = X[:, j] @ residual / n + b[j]
            new = np.sign(z) * max(abs(z) - lam, 0.0)
            if new != b[j]:
                residual -= X[:, j] * (new - b[j])
                largest = max(largest, abs(new - b[j]))
                b[j] = new
        if largest <= tol:
            break
    return b


def grid_minimize(objective, lo: float, hi: float, step: float = 1e-3, refine: float = 1e-8) -> float:
    """Scalar minimizer of a vectorized objective by grid search, refined on finer grids around the best point"""
    grid = np.arange(lo, hi + step / 2, step)
    best = grid[int(np.argmin(objective(grid)))]
    width = step
    while width > refine:
        local = np.linspace(best - width, best + width, 21)
        best = local[int(np.argmin(objective(local)))]
        width /= 10.0
    return float(best)


@pytest.fixture
def rng():
    """Seeded generator per test"""
    return np.random.default_rng(20170419)


@pytest.fixture
def random_problem(rng):
    """Factory for random normalized problems"""
    def factory(n: int = 40, p: int = 10, s: int = 3, sigma: float = 0.5) -> Problem:
        return make_problem(rng, n, p, s, sigma)
    return factory


@pytest.fixture
def lasso_oracle():
    return coordinate_descent_lasso


@pytest.fixture
def grid_oracle():
    return grid_minimize


@pytest.fixture
def orthogonal_problem():
    """Bundled example design: orthogonal columns, X^T X = n I"""
    X = np.array([[1.0, 1.0], [1.0, -1.0], [1.0, 1.0], [1.0, -1.0]])
    y = np.array([3.0, 1.0, 3.0, 1.0])
    return Problem(X=X, y=y)
