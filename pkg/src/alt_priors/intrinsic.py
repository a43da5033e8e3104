"""
Arithmetic and fractional intrinsic priors in closed form.

Only the pairs below have closed forms; every other (prior, family) pair is
unavailable. The Bernoulli forms multiply the unnormalized arcsine kernel
θ^{-1/2}(1-θ)^{-1/2}, so the fractional prior keeps its mass above one.
"""

import math
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy import special

from ..core.exceptions import PriorNotAvailableError, ValidationError
from ..models.families import (
    ExponentialScale,
    FamilyDescriptor,
    FamilyId,
    NormalLocScale,
    Param,
    ShiftedExponential,
)

LOG_2PI = math.log(2.0 * math.pi)
LOG_2_OVER_PI = math.log(2.0 / math.pi)

LogDensity = Callable[[FamilyDescriptor, Param, Param], float]

ARITHMETIC = "arithmetic"
FRACTIONAL = "fractional"


def _normal_logpdf(x: float, mean: float, var: float) -> float:
    z = x - mean
    return -0.5 * (LOG_2PI + math.log(var)) - 0.5 * z * z / var


def _bernoulli_arithmetic(family: FamilyDescriptor, theta0: Param, theta: Param) -> float:
    t, t0 = float(theta), float(theta0)
    if not 0.0 < t < 1.0:
        return -math.inf
    return LOG_2_OVER_PI + math.log((1.0 - t0) * (1.0 - t) + t0 * t) + family.log_reference_theta(t)


def _bernoulli_fractional(family: FamilyDescriptor, theta0: Param, theta: Param) -> float:
    t, t0 = float(theta), float(theta0)
    if not 0.0 < t < 1.0:
        return -math.inf
    log_num = float(special.xlogy(t, t0) + special.xlog1py(1.0 - t, -t0))
    log_den = float(special.gammaln(t + 0.5) + special.gammaln(1.5 - t))
    return log_num - log_den + family.log_reference_theta(t)


def _exponential_mean(family: ExponentialScale, theta0: Param, theta: Param) -> Tuple[float, float, float]:
    """(log(μ/μ0), log μ0, log Jacobian dμ/dθ) for either parameterization."""
    log_mu, log_mu0 = family.log_mean(theta), family.log_mean(theta0)
    jacobian = log_mu if family.parameterization == "log" else 0.0
    return log_mu - log_mu0, log_mu0, jacobian


def _exponential_arithmetic(family: FamilyDescriptor, theta0: Param, theta: Param) -> float:
    if not family.in_support(theta):
        return -math.inf
    log_ratio, log_mu0, log_jac = _exponential_mean(family, theta0, theta)  # type: ignore[arg-type]
    return -log_mu0 - 2.0 * float(np.logaddexp(0.0, log_ratio)) + log_jac


def _exponential_fractional(family: FamilyDescriptor, theta0: Param, theta: Param) -> float:
    if not family.in_support(theta):
        return -math.inf
    log_ratio, log_mu0, log_jac = _exponential_mean(family, theta0, theta)  # type: ignore[arg-type]
    if log_ratio > 700.0:
        return -math.inf
    return -log_mu0 - math.exp(log_ratio) + log_jac


def normal_mu_conditional(kind: str, theta0: Param, sigma: float) -> Tuple[float, float, float]:
    """Split an intrinsic prior of (μ, σ) as π(σ) N(μ | mean, var).

    Returns:
        ``(log π(σ), mean, var)``.

    Raises:
        ValidationError: If ``kind`` is unknown.
    """
    mu0, sigma0 = (float(v) for v in theta0)  # type: ignore[union-attr]
    if kind == ARITHMETIC:
        spread = sigma * sigma + sigma0 * sigma0
        return LOG_2_OVER_PI + math.log(sigma0) - math.log(spread), mu0, 0.5 * spread
    if kind == FRACTIONAL:
        var = 0.5 * sigma0 * sigma0
        # half-normal: twice the normal density on (0, ∞)
        return math.log(2.0) + _normal_logpdf(sigma, 0.0, var), mu0, var
    raise ValidationError("intrinsic kind must be 'arithmetic' or 'fractional'", field="kind", value=kind)


def _normal_intrinsic(kind: str, theta0: Param, theta: Param) -> float:
    mu, sigma = theta  # type: ignore[misc]
    if not (sigma > 0.0 and math.isfinite(sigma) and math.isfinite(mu)):
        return -math.inf
    log_sigma, mean, var = normal_mu_conditional(kind, theta0, sigma)
    return log_sigma + _normal_logpdf(mu, mean, var)


def _normal_arithmetic(family: FamilyDescriptor, theta0: Param, theta: Param) -> float:
    return _normal_intrinsic(ARITHMETIC, theta0, theta)


def _normal_fractional(family: FamilyDescriptor, theta0: Param, theta: Param) -> float:
    return _normal_intrinsic(FRACTIONAL, theta0, theta)


def log_one_sided_arithmetic(u: float) -> float:
    """log π^A at u = θ - θ0 > 0 for the one-sided shifted exponential.

    π^A = -log(1 - x)/x - 1 with x = e^{-u}; a series in x avoids the
    cancellation for large u.
    """
    if u < 0.0 or math.isnan(u):
        return -math.inf
    if u == 0.0:
        return math.inf
    x = math.exp(-u)
    if x < 1e-3:
        return -u + math.log(0.5 + x / 3.0 + x * x / 4.0 + x**3 / 5.0)
    return math.log(-math.log1p(-x) / x - 1.0)


def _shifted_arithmetic(family: FamilyDescriptor, theta0: Param, theta: Param) -> float:
    return log_one_sided_arithmetic(float(theta) - float(theta0))


_CLOSED_FORMS: Dict[Tuple[FamilyId, str], LogDensity] = {
    (FamilyId.BERNOULLI, ARITHMETIC): _bernoulli_arithmetic,
    (FamilyId.BERNOULLI, FRACTIONAL): _bernoulli_fractional,
    (FamilyId.EXPONENTIAL_SCALE, ARITHMETIC): _exponential_arithmetic,
    (FamilyId.EXPONENTIAL_SCALE, FRACTIONAL): _exponential_fractional,
    (FamilyId.NORMAL_LOCSCALE, ARITHMETIC): _normal_arithmetic,
    (FamilyId.NORMAL_LOCSCALE, FRACTIONAL): _normal_fractional,
    (FamilyId.SHIFTED_EXPONENTIAL, ARITHMETIC): _shifted_arithmetic,
}

_UNAVAILABLE: Dict[FamilyId, str] = {
    FamilyId.NORMAL_MIXTURE: "there is no minimal training sample: the intrinsic Bayes factor cannot be defined",
    FamilyId.GAMMA_MEAN: "no closed-form intrinsic prior for the gamma mean",
    FamilyId.LINEAR_MODEL: "use the JZS prior for the linear model",
}


def intrinsic_log_density_fn(kind: str, family: FamilyDescriptor) -> LogDensity:
    """Closed-form log π^A or log π^F for ``family``.

    Raises:
        PriorNotAvailableError: If the pair has no closed form.
    """
    prior_label = f"{kind}_intrinsic"
    if family.family_id in _UNAVAILABLE:
        raise PriorNotAvailableError(_UNAVAILABLE[family.family_id], family=family.label, prior=prior_label)
    if isinstance(family, NormalLocScale) and family.known_sigma is not None:
        raise PriorNotAvailableError(
            "intrinsic priors are given for the joint (mu, sigma) test only", family=family.label, prior=prior_label
        )
    if isinstance(family, ShiftedExponential) and family.side != "one_sided":
        raise PriorNotAvailableError(
            "intrinsic priors exist only for the one-sided irregular test", family=family.label, prior=prior_label
        )
    try:
        return _CLOSED_FORMS[(family.family_id, kind)]
    except KeyError:
        raise PriorNotAvailableError(
            f"no closed-form {kind} intrinsic prior", family=family.label, prior=prior_label
        ) from None


def intrinsic_density(
    kind: str,
    family: FamilyDescriptor,
    theta0: Param,
    theta: Param,
    nu: Optional[float] = None,
) -> float:
    """Value of the arithmetic (``kind="arithmetic"``) or fractional intrinsic prior at ``theta``.

    Raises:
        PriorNotAvailableError: If the pair has no closed form.
        ValidationError: If ``kind`` is unknown.
    """
    if kind not in (ARITHMETIC, FRACTIONAL):
        raise ValidationError("intrinsic kind must be 'arithmetic' or 'fractional'", field="kind", value=kind)
    family.require_nu(nu)
    log_density = intrinsic_log_density_fn(kind, family)
    return math.exp(log_density(family, theta0, theta))
