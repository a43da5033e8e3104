"""
Normalizing constants c(q) = ∫ (1 + D̄[θ, θ0])^-q π^N(θ|ν) dθ.

Closed forms are used where the integral has one (shifted exponential, normal
mean with known σ, linear model, the μ-integral of the normal location-scale
family); everything else goes through chart quadrature. The gamma family needs
c(q, α) as a function of the shape, served by :class:`ConditionalNormalizer`.
"""

import functools
import math
import threading
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy import special
from scipy.interpolate import PchipInterpolator

from ..core.exceptions import NumericalError, QuadratureError, ValidationError
from ..core.logger import get_logger
from ..divergence import DivergenceKind, UnitaryDivergence, unitary
from ..models.families import (
    FamilyDescriptor,
    GammaMean,
    LinearModel,
    NormalLocScale,
    Param,
    ShiftedExponential,
)
from ..numerics.quadrature import (
    DEFAULT_ACCEPT_REL_TOL,
    DEFAULT_REL_TOL,
    Interval,
    integrate,
    integrate_log,
)
from .kernels import log_poly_kernel

logger = get_logger(__name__)

LOG_PI = math.log(math.pi)


def _log_cosh(x: float) -> float:
    x = abs(x)
    return x + math.log1p(math.exp(-2.0 * x)) - math.log(2.0)


def _log_gamma_ratio(q: float, k: float) -> float:
    """log [π^{k/2} Γ(q - k/2) / Γ(q)], the radial part of ∫ (1 + |x|²)^-q dx over R^k."""
    return 0.5 * k * LOG_PI + float(special.gammaln(q - 0.5 * k)) - float(special.gammaln(q))


def _log_scale_log_normalizer(
    divergence: UnitaryDivergence,
    q: float,
    nu: Optional[float],
    rel_tol: float,
    accept_rel_tol: float,
) -> float:
    """c(q) in x = log θ - log θ0, where π^N dθ = dx; free of θ0."""
    # D̄ ≈ ν x² near 0 for the gamma shape ν
    width = 1.0 / math.sqrt(float(nu)) if nu is not None else 1.0

    def log_f(x: float) -> float:
        return log_poly_kernel(divergence.at_log_ratio(x, nu), q)

    result = integrate_log(log_f, Interval.real_line(), rel_tol, hint=0.0, hint_scale=width)
    return result.require(accept_rel_tol, f"DB normalizer of {divergence.family.label} at q={q}")


def _scalar_log_normalizer(
    divergence: UnitaryDivergence,
    q: float,
    nu: Optional[float],
    rel_tol: float,
    accept_rel_tol: float,
) -> float:
    family = divergence.family
    theta0 = divergence.theta0
    if family.log_scale:
        return _log_scale_log_normalizer(divergence, q, nu, rel_tol, accept_rel_tol)
    chart = family.chart(theta0=theta0)

    def log_f(u: float) -> float:
        theta = chart.to_theta(u)
        if not family.in_support(theta, theta0):
            return -math.inf
        return (
            log_poly_kernel(divergence(theta, nu), q)
            + family.log_reference_theta(theta, nu)
            + chart.log_jacobian(u)
        )

    hint = chart.from_theta(float(theta0))
    result = integrate_log(log_f, chart.domain, rel_tol, hint=hint, hint_scale=1.0)
    return result.require(accept_rel_tol, f"DB normalizer of {family.label} at q={q}")


def _normal_log_normalizer(theta0: Param, q: float, rel_tol: float, accept_rel_tol: float) -> float:
    """c(q) for (μ, σ): the μ-integral in closed form, then quadrature over z = log(σ/σ0)."""
    _, sigma0 = theta0  # type: ignore[misc]
    sigma0 = float(sigma0)
    if not q > 0.5:
        return math.inf
    log_pref = _log_gamma_ratio(q, 1.0)
    log_two_var = math.log(2.0) + 2.0 * math.log(sigma0)

    def log_f(z: float) -> float:
        # 1 + A = cosh 2z, B = (1 + e^{-2z}) / (2 σ0²)
        log_b = float(np.logaddexp(0.0, -2.0 * z)) - log_two_var
        return (0.5 - q) * _log_cosh(2.0 * z) - 0.5 * log_b

    result = integrate_log(log_f, Interval.real_line(), rel_tol, hint=0.0, hint_scale=1.0)
    return log_pref + result.require(accept_rel_tol, f"normal location-scale normalizer at q={q}")


def _linear_log_normalizer(family: LinearModel, q: float, sigma: float) -> float:
    k = family.geometry.k_e
    if not q > 0.5 * k:
        return math.inf
    sign, logdet = np.linalg.slogdet(family.geometry.VtV / family.n_rows)
    if sign <= 0:
        raise NumericalError("VᵗV is not positive definite", point=sigma)
    # det(A)^{-1/2} with A = VᵗV / (n σ²)
    return _log_gamma_ratio(q, k) - 0.5 * float(logdet) + k * math.log(sigma)


def log_db_normalizer(
    family: FamilyDescriptor,
    kind: DivergenceKind,
    theta0: Param,
    q: float,
    nu: Optional[float] = None,
    *,
    rel_tol: float = DEFAULT_REL_TOL,
    accept_rel_tol: float = DEFAULT_ACCEPT_REL_TOL,
) -> float:
    """log c(q), conditional on ``nu`` for nuisance families.

    Returns ``inf`` when q is at or below the tail index of a closed form.

    Raises:
        PriorNotAvailableError: If the kind does not exist for the family.
        QuadratureError: If the quadrature misses ``accept_rel_tol``.
    """
    divergence = unitary(family, kind, theta0)
    if isinstance(family, ShiftedExponential):
        if not q > 1.0:
            return math.inf
        mass = 1.0 / (q - 1.0)
        return math.log(mass if family.side == "two_sided" else 0.5 * mass)
    if isinstance(family, NormalLocScale):
        if family.known_sigma is not None:
            if not q > 0.5:
                return math.inf
            return math.log(family.known_sigma) + _log_gamma_ratio(q, 1.0)
        return _normal_log_normalizer(theta0, q, rel_tol, accept_rel_tol)
    if isinstance(family, LinearModel):
        return _linear_log_normalizer(family, q, float(family.require_nu(nu)))
    return _scalar_log_normalizer(divergence, q, family.require_nu(nu), rel_tol, accept_rel_tol)


def db_normalizer(
    family: FamilyDescriptor,
    kind: DivergenceKind,
    theta0: Param,
    q: float,
    nu: Optional[float] = None,
    **tolerances: float,
) -> float:
    """c(q); see :func:`log_db_normalizer`."""
    return math.exp(log_db_normalizer(family, kind, theta0, q, nu, **tolerances))


class ConditionalNormalizer:
    """log c(q★, α) for the gamma family, cached and interpolated in log α.

    Exact values are memoized in a lock-protected dict. Inside ``bounds`` the
    interpolator, a monotone PCHIP through ``grid`` exact values of log c
    against log α, answers instead; it is built on first use.
    """

    def __init__(
        self,
        exact: Callable[[float], float],
        grid: int = 241,
        bounds: Tuple[float, float] = (1e-3, 1e5),
    ) -> None:
        self._exact = exact
        self._grid = grid
        self._bounds = (float(bounds[0]), float(bounds[1]))
        self._lock = threading.Lock()
        self._values: Dict[float, float] = {}
        self._interpolator: Optional[PchipInterpolator] = None

    def exact(self, alpha: float) -> float:
        """Exact log c(q★, α), computed by quadrature on a cache miss."""
        alpha = float(alpha)
        with self._lock:
            cached = self._values.get(alpha)
        if cached is not None:
            return cached
        value = self._exact(alpha)
        with self._lock:
            self._values.setdefault(alpha, value)
        return value

    def _ensure_interpolator(self) -> PchipInterpolator:
        with self._lock:
            if self._interpolator is not None:
                return self._interpolator
        log_alphas = np.linspace(math.log(self._bounds[0]), math.log(self._bounds[1]), self._grid)
        values = np.array([self.exact(math.exp(x)) for x in log_alphas])
        if not np.all(np.isfinite(values)):
            raise QuadratureError("gamma normalizer grid contains non-finite values")
        interpolator = PchipInterpolator(log_alphas, values)
        with self._lock:
            if self._interpolator is None:
                self._interpolator = interpolator
                logger.debug(f"gamma normalizer grid built with {self._grid} points")
            return self._interpolator

    def log_value(self, alpha: float, exact: bool = False) -> float:
        alpha = float(alpha)
        if not (alpha > 0.0 and math.isfinite(alpha)):
            return math.nan
        if exact or not self._bounds[0] <= alpha <= self._bounds[1]:
            return self.exact(alpha)
        return float(self._ensure_interpolator()(math.log(alpha)))

    def __call__(self, alpha: float) -> float:
        """c(q★, α)."""
        return math.exp(self.log_value(alpha))


def gamma_conditional_normalizer(
    family: GammaMean,
    kind: DivergenceKind,
    theta0: float,
    q: float,
    *,
    grid: int = 241,
    bounds: Tuple[float, float] = (1e-3, 1e5),
    rel_tol: float = DEFAULT_REL_TOL,
    accept_rel_tol: float = DEFAULT_ACCEPT_REL_TOL,
) -> ConditionalNormalizer:
    """Cache of α ↦ log c(q, α) for one gamma prior."""

    def exact(alpha: float) -> float:
        return log_db_normalizer(
            family, kind, theta0, q, alpha, rel_tol=rel_tol, accept_rel_tol=accept_rel_tol
        )

    return ConditionalNormalizer(exact, grid=grid, bounds=bounds)


@functools.lru_cache(maxsize=None)
def normal_sum_kappa() -> float:
    """κ = ∫_0^∞ s ((1 + s⁴)(1 + s²))^{-1/2} ds."""

    def f(s: float) -> float:
        return s / math.sqrt((1.0 + s**4) * (1.0 + s * s))

    return integrate(f, Interval.positive(), 1e-12, scale=1.0).require(1e-10, "kappa")


def normal_sum_marginal_sigma(sigma: float, sigma0: float) -> float:
    """Marginal sum-DB density of σ for the normal location-scale family."""
    if not sigma > 0.0:
        return 0.0
    num = sigma * sigma0
    den = normal_sum_kappa() * math.sqrt((sigma0**4 + sigma**4) * (sigma0**2 + sigma**2))
    return num / den


def normal_sum_conditional_mu(mu: float, sigma: float, mu0: float, sigma0: float) -> float:
    """Conditional sum-DB density of μ given σ: Cauchy at μ0 with squared scale Σ."""
    big_sigma = (sigma0**4 + sigma**4) / (sigma0**2 + sigma**2)
    scale = math.sqrt(big_sigma)
    z = (mu - mu0) / scale
    return 1.0 / (math.pi * scale * (1.0 + z * z))


def gamma_sum_normalizer(alpha: float) -> float:
    """c(1/2, α) of the gamma sum-DB prior, 4·K(1 − 4α).

    K is the complete elliptic integral of the first kind in the parameter
    convention; α = 1 gives the exponential normalizer.
    """
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise ValidationError("gamma shape must be positive and finite", field="alpha", value=alpha)
    return 4.0 * float(special.ellipk(1.0 - 4.0 * alpha))
