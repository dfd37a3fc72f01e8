"""
Problem Model
Design matrix and response of the linear model y = X beta + eps
"""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from plse.exceptions import DimensionMismatchError, ProblemValidationError

# Relative tolerance on ||x_j||^2 = n
COLUMN_NORM_RTOL = 1e-8


def normalize_columns(X: np.ndarray) -> np.ndarray:
    """Rescale every column to squared norm n"""
    X = np.asarray(X, dtype=float)
    norms = np.linalg.norm(X, axis=0)
    if np.any(norms == 0):
        raise ProblemValidationError(
            "cannot normalize a zero column", {"columns": np.flatnonzero(norms == 0).tolist()}
        )
    return X * (np.sqrt(X.shape[0]) / norms)


class Problem(BaseModel):
    """
    Least-squares problem with loss ||y - X b||^2 / (2n)

    With column_norms_checked, every column must satisfy ||x_j||^2 = n.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    X: np.ndarray
    y: np.ndarray
    column_norms_checked: bool = True

    def __init__(self, **data: Any):
        super().__init__(**data)
        # raised after validation: typed errors reach the caller unwrapped
        self._check_invariants()

    @field_validator("X", "y", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        array = np.array(value, dtype=float)
        array.setflags(write=False)
        return array

    def _check_invariants(self) -> None:
        if not (np.all(np.isfinite(self.X)) and np.all(np.isfinite(self.y))):
            raise ProblemValidationError("design and response must be finite")
        if self.X.ndim != 2 or self.y.ndim != 1:
            raise DimensionMismatchError("X must be n x p and y a vector", {"X": self.X.shape, "y": self.y.shape})
        if self.X.shape[0] != self.y.shape[0]:
            raise DimensionMismatchError(
                "X and y have different numbers of rows", {"X": self.X.shape, "y": self.y.shape}
            )
        if self.column_norms_checked:
            squared = np.einsum("ij,ij->j", self.X, self.X)
            bad = np.flatnonzero(np.abs(squared - self.n) > COLUMN_NORM_RTOL * self.n)
            if bad.size:
                raise ProblemValidationError(
                    "columns must satisfy ||x_j||^2 = n", {"columns": bad[:10].tolist()}
                )

    @classmethod
    def from_arrays(cls, X: np.ndarray, y: np.ndarray, normalize: bool = False) -> "Problem":
        if normalize:
            X = normalize_columns(X)
        return cls(X=X, y=y, column_norms_checked=normalize)

    @property
    def n(self) -> int:
        return int(self.X.shape[0])

    @property
    def p(self) -> int:
        return int(self.X.shape[1])

    @property
    def gram(self) -> np.ndarray:
        """Sigma_bar = X^T X / n"""
        return self.X.T @ self.X / self.n

    def correlation(self, b: np.ndarray = None) -> np.ndarray:
        """X^T (y - X b) / n"""
        residual = self.y if b is None else self.y - self.X @ b
        return self.X.T @ residual / self.n

    def loss(self, b: np.ndarray) -> float:
        residual = self.y - self.X @ b
        return float(residual @ residual) / (2.0 * self.n)

    def check_coefficients(self, b: np.ndarray) -> np.ndarray:
        b = np.asarray(b, dtype=float)
        if b.shape != (self.p,):
            raise DimensionMismatchError("coefficient vector has the wrong length", {"length": b.size, "p": self.p})
        return b
