"""
Student and Cauchy approximations of DB priors built from the Fisher information.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Optional, Union

import numpy as np
from scipy import stats

from ..core.exceptions import NumericalError, UnsupportedOperationError, ValidationError
from ..divergence import DivergenceKind
from ..models.families import FamilyDescriptor, FamilyId, Param
from ..models.linear import linear_model_geometry
from .tail_index import q_lower


@dataclass(frozen=True, eq=False)
class ApproxDBPrior:
    """Multivariate Student density St_k(θ | θ0, scale_matrix, degrees).

    With ``degrees == 1`` this is the Cauchy approximation Ca_k(θ0, n★ J⁻¹).
    """

    theta0: np.ndarray
    scale_matrix: np.ndarray
    degrees: float = 1.0
    _dist: Any = field(init=False, repr=False)

    def __post_init__(self) -> None:
        theta0 = np.atleast_1d(np.asarray(self.theta0, dtype=float))
        scale = np.atleast_2d(np.asarray(self.scale_matrix, dtype=float))
        if scale.shape != (theta0.size, theta0.size):
            raise ValidationError("scale matrix must be k x k", field="scale_matrix", value=scale.shape)
        if not np.allclose(scale, scale.T, rtol=1e-10, atol=0.0):
            raise ValidationError("scale matrix must be symmetric", field="scale_matrix")
        try:
            np.linalg.cholesky(scale)
        except np.linalg.LinAlgError as e:
            raise NumericalError("scale matrix is not positive definite") from e
        if not self.degrees > 0.0:
            raise ValidationError("degrees of freedom must be positive", field="degrees", value=self.degrees)
        object.__setattr__(self, "theta0", theta0)
        object.__setattr__(self, "scale_matrix", scale)
        object.__setattr__(self, "_dist", stats.multivariate_t(loc=theta0, shape=scale, df=self.degrees))

    @property
    def dim(self) -> int:
        return int(self.theta0.size)

    def log_density(self, theta: Param) -> float:
        x = np.atleast_1d(np.asarray(theta, dtype=float))
        return float(self._dist.logpdf(x))

    def density(self, theta: Param) -> float:
        return math.exp(self.log_density(theta))


def _unit_scale_matrix(family: FamilyDescriptor, theta0: Param, nu: Optional[float]) -> np.ndarray:
    """n★(1) J_θ(θ0, ν)⁻¹ from the per-observation Fisher information."""
    fisher = np.atleast_2d(family.fisher_unit(theta0, nu))
    try:
        inverse = np.linalg.inv(fisher)
    except np.linalg.LinAlgError as e:
        raise NumericalError("Fisher information is singular", point=theta0) from e
    return family.n_star(1) * inverse


def _check_flat(family: FamilyDescriptor) -> None:
    if not family.flat_reference:
        raise UnsupportedOperationError(
            "the k/2 rule does not apply: the reference prior pi^N(theta|nu) depends on theta",
            family=family.label,
        )


def approx_db_prior(family: FamilyDescriptor, theta0: Param, nu: Optional[float] = None) -> ApproxDBPrior:
    """Cauchy approximation Ca_k(θ0, n★ J_θ(θ0, ν)⁻¹).

    Raises:
        UnsupportedOperationError: If π^N(θ|ν) is not constant in θ, or the
            family has no Fisher information.
    """
    _check_flat(family)
    nu = family.require_nu(nu)
    family.validate_theta(theta0, theta0)
    if family.family_id is FamilyId.NORMAL_MIXTURE and float(theta0) != 0.0:
        raise ValidationError("the mixture null is mu = 0", field="theta0", value=theta0)
    return ApproxDBPrior(theta0=theta0, scale_matrix=_unit_scale_matrix(family, theta0, nu), degrees=1.0)


def local_student_approximation(
    family: FamilyDescriptor,
    kind: Union[str, DivergenceKind],
    theta0: Param,
    nu: Optional[float] = None,
) -> ApproxDBPrior:
    """St_k(θ0, n★J⁻¹/d, d) with d = 2q̲ - k + 1, the DB prior near θ0.

    Raises:
        UnsupportedOperationError: If π^N(θ|ν) is not constant or d ≤ 0.
    """
    _check_flat(family)
    nu = family.require_nu(nu)
    lower = q_lower(family, kind, theta0, verify=False)
    degrees = 2.0 * lower - family.theta_dim + 1.0
    if not degrees > 0.0:
        raise UnsupportedOperationError(
            f"no local Student form: 2 q_lower - k + 1 = {degrees:g}", family=family.label
        )
    scale = _unit_scale_matrix(family, theta0, nu) / degrees
    return ApproxDBPrior(theta0=theta0, scale_matrix=scale, degrees=degrees)


def jzs_linear_model(X1: Any, Xe: Any, sigma: float, n: int) -> ApproxDBPrior:
    """Cauchy prior Ca_{k_e}(β_e | 0, n σ² (VᵗV)⁻¹) on the tested block.

    The common block and σ keep the reference prior σ⁻¹.

    Args:
        X1: Common design, n x p1 (may have zero columns).
        Xe: Tested design, n x k_e.
        sigma: Error scale.
        n: Sample size; must match the design rows.

    Raises:
        ValidationError: If the designs are rank deficient, ``k_e`` is zero or
            ``n`` does not match.
    """
    geometry = linear_model_geometry(X1, Xe)
    if geometry.k_e == 0:
        raise ValidationError("no tested coefficients: k_e = 0", field="Xe")
    if n != geometry.V.shape[0]:
        raise ValidationError("n must equal the number of design rows", field="n", value=n)
    if not (math.isfinite(sigma) and sigma > 0.0):
        raise ValidationError("sigma must be positive", field="sigma", value=sigma)
    scale = n * sigma * sigma * np.linalg.inv(geometry.VtV)
    return ApproxDBPrior(theta0=np.zeros(geometry.k_e), scale_matrix=0.5 * (scale + scale.T), degrees=1.0)
