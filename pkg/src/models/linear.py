"""Orthogonal geometry of the nested linear-model test."""

from typing import List, NamedTuple

import numpy as np

from ..core.exceptions import ValidationError


class LinearGeometry(NamedTuple):
    """``V = (I - P1) Xe``, its Gram matrix and the number of tested coefficients."""

    V: np.ndarray
    VtV: np.ndarray
    k_e: int


def as_design_matrix(X: np.ndarray, name: str) -> np.ndarray:
    M = np.asarray(X, dtype=float)
    if M.ndim == 1:
        M = M[:, None]
    if M.ndim != 2:
        raise ValidationError(f"{name} must be a matrix", field=name, value=M.shape)
    if not np.all(np.isfinite(M)):
        raise ValidationError(f"{name} has non-finite entries", field=name)
    return M


def _dependent_columns(M: np.ndarray, labels: List[str]) -> List[str]:
    kept: List[int] = []
    dependent: List[str] = []
    for j in range(M.shape[1]):
        candidate = kept + [j]
        if np.linalg.matrix_rank(M[:, candidate]) == len(candidate):
            kept = candidate
        else:
            dependent.append(labels[j])
    return dependent


def linear_model_geometry(X1: np.ndarray, Xe: np.ndarray) -> LinearGeometry:
    """Project the tested columns onto the orthogonal complement of ``X1``.

    Args:
        X1: Common design block (n x p1); may have zero columns.
        Xe: Tested design block (n x k_e).

    Returns:
        LinearGeometry with ``V``, ``V^T V`` and ``k_e``.

    Raises:
        ValidationError: If ``(X1 | Xe)`` is rank deficient; the message names
            the dependent columns.
    """
    X1 = as_design_matrix(X1, "X1")
    Xe = as_design_matrix(Xe, "Xe")
    if X1.shape[0] != Xe.shape[0]:
        raise ValidationError("X1 and Xe must have the same number of rows", field="Xe", value=Xe.shape)

    full = np.hstack([X1, Xe])
    if np.linalg.matrix_rank(full) < full.shape[1]:
        labels = [f"X1[:, {j}]" for j in range(X1.shape[1])] + [f"Xe[:, {j}]" for j in range(Xe.shape[1])]
        dependent = _dependent_columns(full, labels)
        raise ValidationError(
            "design (X1 | Xe) is rank deficient; dependent columns: " + ", ".join(dependent),
            field="design",
            value=dependent,
        )

    if X1.shape[1] == 0:
        V = Xe.copy()
    else:
        V = Xe - X1 @ np.linalg.solve(X1.T @ X1, X1.T @ Xe)
    return LinearGeometry(V=V, VtV=V.T @ V, k_e=Xe.shape[1])
