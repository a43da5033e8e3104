"""
Evidence limits and evidence-consistency scans.

An evidence limit is the largest support a sample of size n can give the
simple model: B⁰(n) evaluates B12 at the boundary statistic where the data
agree with θ0 as much as possible, and for the normal location-scale family
B¹(n) integrates the mixing density π★(α, β) of the alternative prior in
the standardized coordinates μ = μ0 + σ0 αβ, σ = σ0 β.

A consistency scan walks a statistic geometrically towards a boundary of the
sample space and records log B12 at every step.
"""

import math
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy import stats as sps

from ..alt_priors.comparison import ComparisonPrior, ComparisonPriorId
from ..core.config import DBPriorsConfig, get_default_config
from ..core.exceptions import UnsupportedOperationError, ValidationError
from ..core.logger import get_logger
from ..db_prior import DBPrior, normal_sum_kappa
from ..divergence import DivergenceKind
from ..models.families import (
    ExponentialScale,
    FamilyDescriptor,
    NormalLocScale,
    NormalMixture,
    Param,
    ShiftedExponential,
)
from ..models.stats import (
    ExponentialStats,
    MixtureStats,
    NormalStats,
    ShiftedExponentialStats,
    SuffStats,
)
from ..numerics.quadrature import Interval, integrate_log
from .factors import Prior, log_bayes_factor

logger = get_logger(__name__)

LOG_PI = math.log(math.pi)


class LimitKind(str, Enum):
    """Which evidence limit a curve holds."""

    B0_NULL_BOUNDARY = "B0_null_boundary"
    B1_NULL_POINT = "B1_null_point"


class LimitCurve(BaseModel):
    """Evidence limit as a function of the sample size."""

    model_config = ConfigDict(frozen=True)

    n_values: Tuple[int, ...]
    values: Tuple[float, ...]
    which: LimitKind

    @model_validator(mode="after")
    def _check_values(self) -> "LimitCurve":
        if len(self.n_values) != len(self.values):
            raise ValueError("n_values and values must have the same length")
        if not all(v > 0.0 and math.isfinite(v) for v in self.values):
            raise ValueError("limit values must be finite and positive")
        return self

    def is_nondecreasing(self) -> bool:
        return bool(np.all(np.diff(self.values) >= 0.0))

    def linear_fit_r2(self) -> float:
        """R² of the least-squares line through (n, limit)."""
        if len(self.values) < 3:
            raise ValidationError("a linear fit needs at least three points", field="n_values", value=len(self.values))
        fit = sps.linregress(self.n_values, self.values)
        return float(fit.rvalue**2)

    def to_records(self) -> Tuple[Dict[str, Any], ...]:
        return tuple({"n": n, self.which.value: v} for n, v in zip(self.n_values, self.values))


def _mixing_key(prior: Any) -> str:
    if isinstance(prior, DBPrior) and prior.kind is DivergenceKind.SUM:
        return "S"
    if isinstance(prior, ComparisonPrior) and prior.prior_id in (
        ComparisonPriorId.ARITHMETIC_INTRINSIC,
        ComparisonPriorId.FRACTIONAL_INTRINSIC,
    ):
        return prior.prior_id.label
    raise UnsupportedOperationError(
        "the null-point limit is available for the sum-DB, arithmetic and fractional priors",
        family=getattr(getattr(prior, "family", None), "label", None),
    )


def normal_mixing_log_density(key: str, alpha: float, beta: float) -> float:
    """log π★(α, β) of the normal location-scale alternatives.

    ``key`` is ``S`` (sum-DB), ``A`` (arithmetic intrinsic) or ``F``
    (fractional intrinsic). Each density is the prior of (μ, σ) = (αβ, β)
    at (μ0, σ0) = (0, 1) times the Jacobian β.
    """
    if not beta > 0.0:
        return -math.inf
    b2 = beta * beta
    if key == "S":
        log_scale = math.log1p(b2 * b2 + b2 * alpha * alpha * (1.0 + b2))
        return 2.0 * math.log(beta) - LOG_PI - math.log(normal_sum_kappa()) - log_scale
    if key == "A":
        return math.log(2.0 * beta) - 1.5 * LOG_PI - 1.5 * math.log1p(b2) - alpha * alpha * b2 / (1.0 + b2)
    if key == "F":
        return math.log(2.0 * beta) - LOG_PI - b2 * (1.0 + alpha * alpha)
    raise ValidationError("mixing density key must be S, A or F", field="key", value=key)


def _normal_null_point(key: str, n: int, config: DBPriorsConfig) -> float:
    numerics = config.numerics
    worst_inner = 0.0

    def log_outer(w: float) -> float:
        nonlocal worst_inner
        if abs(w) > 350.0:
            return -math.inf
        beta = math.exp(w)
        base = -n * w - 0.5 * n / (beta * beta) + 0.5 * n + w

        def log_inner(alpha: float) -> float:
            return -0.5 * n * alpha * alpha + normal_mixing_log_density(key, alpha, beta)

        inner = integrate_log(
            log_inner,
            Interval.real_line(),
            numerics.rel_tol,
            hint=0.0,
            hint_scale=1.0 / math.sqrt(n),
            grid_size=101,
            limit=numerics.subdivision_limit,
            allow_zero=True,
        )
        worst_inner = max(worst_inner, inner.rel_err)
        return inner.require(numerics.accept_rel_tol, "null-point limit over alpha") + base

    result = integrate_log(
        log_outer,
        Interval.real_line(),
        numerics.rel_tol,
        hint=0.0,
        hint_scale=1.0 / math.sqrt(2.0 * n),
        grid_size=161,
        limit=numerics.subdivision_limit,
    )
    # the integral is B21 at the null point; the limit in favour of M1 is its reciprocal
    log_bf21 = result.require(numerics.accept_rel_tol, "null-point limit over log beta")
    logger.debug(f"B1({n}) for prior {key}: relative error {result.rel_err + worst_inner:.2g}")
    return math.exp(-log_bf21)


def _null_mean(family: ExponentialScale, theta0: Param) -> float:
    return math.exp(float(theta0)) if family.parameterization == "log" else float(theta0)


def _boundary_stats(family: FamilyDescriptor, theta0: Param, n: int) -> SuffStats:
    if isinstance(family, ExponentialScale):
        return ExponentialStats(n=n, ybar=_null_mean(family, theta0))
    if isinstance(family, ShiftedExponential):
        if family.side == "one_sided":
            raise UnsupportedOperationError(
                "B12 grows without bound as T approaches theta0 in the one-sided test", family=family.label
            )
        return ShiftedExponentialStats(n=n, tmin=float(theta0))
    if isinstance(family, NormalMixture):
        return MixtureStats.of(np.zeros(n))
    raise UnsupportedOperationError("no null-boundary limit for this family", family=family.label)


def evidence_limit(
    family: FamilyDescriptor,
    prior: Prior,
    n: int,
    which: LimitKind = LimitKind.B0_NULL_BOUNDARY,
    *,
    config: Optional[DBPriorsConfig] = None,
) -> float:
    """Evidence limit in favour of M1 at sample size ``n``.

    Args:
        family: Sampling family.
        prior: Prior of the alternative.
        n: Sample size.
        which: ``B0_null_boundary`` evaluates B12 at the boundary statistic
            (exponential: ȳ = μ0; two-sided irregular: T = θ0; mixture:
            an all-zero sample). ``B1_null_point`` integrates the mixing
            density of the normal location-scale alternatives.
        config: Numerical settings.

    Returns:
        The limit, a positive real.

    Raises:
        UnsupportedOperationError: If the limit is not defined for the pair.
    """
    config = config or get_default_config()
    which = LimitKind(which)
    if n < 1:
        raise ValidationError("n must be positive", field="n", value=n)

    if which is LimitKind.B1_NULL_POINT:
        if not (isinstance(family, NormalLocScale) and family.known_sigma is None):
            raise UnsupportedOperationError(
                "the null-point limit is defined for the normal location-scale family", family=family.label
            )
        return _normal_null_point(_mixing_key(prior), n, config)

    stats = _boundary_stats(family, prior.theta0, n)
    log_bf, _ = log_bayes_factor(family, prior, stats, config=config)
    return math.exp(log_bf)


def evidence_limit_curve(
    family: FamilyDescriptor,
    prior: Prior,
    n_values: Sequence[int],
    which: LimitKind = LimitKind.B0_NULL_BOUNDARY,
    *,
    config: Optional[DBPriorsConfig] = None,
) -> LimitCurve:
    """:func:`evidence_limit` over a grid of sample sizes."""
    which = LimitKind(which)
    ns = tuple(int(n) for n in n_values)
    values = tuple(evidence_limit(family, prior, n, which, config=config) for n in ns)
    return LimitCurve(n_values=ns, values=values, which=which)


class ScanDirection(str, Enum):
    """Boundary of the sample space a consistency scan walks towards."""

    YBAR_TO_ZERO = "ybar_to_zero"
    YBAR_TO_INFINITY = "ybar_to_infinity"
    T_TO_INFINITY = "t_to_infinity"
    T_TO_NULL = "t_to_null"
    YBAR_TO_PLUS_INFINITY = "ybar_to_plus_infinity"
    YBAR_TO_MINUS_INFINITY = "ybar_to_minus_infinity"
    S_TO_INFINITY = "s_to_infinity"
    OBSERVATION_TO_INFINITY = "observation_to_infinity"
    OBSERVATION_TO_MINUS_INFINITY = "observation_to_minus_infinity"


_DIRECTIONS = {
    ExponentialScale: (ScanDirection.YBAR_TO_ZERO, ScanDirection.YBAR_TO_INFINITY),
    ShiftedExponential: (ScanDirection.T_TO_INFINITY, ScanDirection.T_TO_NULL),
    NormalLocScale: (
        ScanDirection.YBAR_TO_PLUS_INFINITY,
        ScanDirection.YBAR_TO_MINUS_INFINITY,
        ScanDirection.S_TO_INFINITY,
    ),
    NormalMixture: (ScanDirection.OBSERVATION_TO_INFINITY, ScanDirection.OBSERVATION_TO_MINUS_INFINITY),
}

_DEFAULT_RATIO = {
    ExponentialScale: 10.0,
    ShiftedExponential: 2.0,
    NormalLocScale: 2.0,
    NormalMixture: 2.0,
}


class ConsistencyScan(BaseModel):
    """log B12 along a geometric walk of one statistic."""

    model_config = ConfigDict(frozen=True)

    direction: ScanDirection
    points: Tuple[float, ...]
    log_bf12: Tuple[float, ...]

    @property
    def bf12(self) -> Tuple[float, ...]:
        return tuple(math.exp(v) for v in self.log_bf12)

    def is_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.log_bf12) < 0.0))

    def is_increasing(self) -> bool:
        return bool(np.all(np.diff(self.log_bf12) > 0.0))


def _scan_stats(
    family: FamilyDescriptor, theta0: Param, n: int, direction: ScanDirection, step: float
) -> Tuple[float, SuffStats]:
    if isinstance(family, ExponentialScale):
        mu0 = _null_mean(family, theta0)
        ybar = mu0 / step if direction is ScanDirection.YBAR_TO_ZERO else mu0 * step
        return ybar, ExponentialStats(n=n, ybar=ybar)

    if isinstance(family, ShiftedExponential):
        t0 = float(theta0)
        tmin = t0 + (step if direction is ScanDirection.T_TO_INFINITY else 1.0 / step)
        return tmin, ShiftedExponentialStats(n=n, tmin=tmin)

    if isinstance(family, NormalLocScale):
        if family.known_sigma is None:
            mu0, sigma0 = (float(v) for v in theta0)  # type: ignore[union-attr]
        else:
            mu0, sigma0 = float(theta0), family.known_sigma
        if direction is ScanDirection.S_TO_INFINITY:
            if family.known_sigma is not None:
                raise UnsupportedOperationError("S carries no information when sigma is known", family=family.label)
            s = sigma0 * step
            return s, NormalStats(n=n, ybar=mu0, s=s)
        sign = 1.0 if direction is ScanDirection.YBAR_TO_PLUS_INFINITY else -1.0
        ybar = mu0 + sign * sigma0 * step
        return ybar, NormalStats(n=n, ybar=ybar, s=sigma0)

    y1 = step if direction is ScanDirection.OBSERVATION_TO_INFINITY else -step
    sample = np.zeros(n)
    sample[0] = y1
    return y1, MixtureStats.of(sample)


def consistency_scan(
    family: FamilyDescriptor,
    prior: Prior,
    n: int,
    direction: ScanDirection,
    steps: int = 5,
    *,
    ratio: Optional[float] = None,
    config: Optional[DBPriorsConfig] = None,
) -> ConsistencyScan:
    """Evaluate log B12 at ``ratio**k``, k = 1..steps, towards a boundary.

    Exponential scans divide or multiply μ0 by the step; irregular scans put
    T at θ0 + step or θ0 + 1/step; normal scans move ȳ by σ0·step or set
    S = σ0·step; mixture scans move the first observation of an otherwise
    all-zero sample.

    Raises:
        ValidationError: If the direction does not apply to the family.
    """
    config = config or get_default_config()
    direction = ScanDirection(direction)
    kind = next((k for k in _DIRECTIONS if isinstance(family, k)), None)
    if kind is None or direction not in _DIRECTIONS[kind]:
        raise ValidationError(
            f"direction {direction.value} does not apply to {family.label}", field="direction", value=direction.value
        )
    if steps < 2:
        raise ValidationError("a scan needs at least two steps", field="steps", value=steps)
    ratio = ratio or _DEFAULT_RATIO[kind]
    if not ratio > 1.0:
        raise ValidationError("ratio must exceed 1", field="ratio", value=ratio)

    points, values = [], []
    for k in range(1, steps + 1):
        point, stats = _scan_stats(family, prior.theta0, n, direction, ratio**k)
        log_bf, _ = log_bayes_factor(family, prior, stats, config=config)
        points.append(point)
        values.append(log_bf)
    logger.debug(f"consistency scan {direction.value} on {family.label}: {values}")
    return ConsistencyScan(direction=direction, points=tuple(points), log_bf12=tuple(values))
