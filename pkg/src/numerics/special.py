"""Polygamma wrappers with domain checks."""

from typing import Union

import numpy as np
from scipy import special

from ..core.exceptions import ValidationError

ArrayLike = Union[float, np.ndarray]


def _check_positive(x: ArrayLike, name: str) -> None:
    values = np.asarray(x, dtype=float)
    if not np.all(values > 0):
        raise ValidationError(f"{name} requires x > 0", field="x", value=x)


def trigamma(x: ArrayLike) -> ArrayLike:
    """psi^(1)(x), the derivative of the digamma function.

    Args:
        x: Positive argument (scalar or array).

    Returns:
        Trigamma values with the shape of ``x``.

    Raises:
        ValidationError: If any ``x <= 0``.
    """
    _check_positive(x, "trigamma")
    out = special.polygamma(1, x)
    return float(out) if np.ndim(x) == 0 else out


def digamma(x: ArrayLike) -> ArrayLike:
    _check_positive(x, "digamma")
    out = special.digamma(x)
    return float(out) if np.ndim(x) == 0 else out
