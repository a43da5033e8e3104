"""
Registry of the sampling families.

Each family is a :class:`FamilyDescriptor` subclass registered under a
:class:`FamilyId` with :func:`register_family`. A descriptor bundles the exact
log-likelihood through sufficient statistics, the reference prior π^N, the
effective sample size n★, the closed-form directed KL per observation, the
per-observation Fisher information and a chart: a smooth bijection from an
unconstrained coordinate onto the parameter space that the integrators use.

Directed divergences follow one convention throughout::

    KL[a:b] = E_b[log f(y|b) - log f(y|a)]

that is, the expectation is taken under the density indexed by the second
argument.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, Optional, Sequence, Tuple, Type, Union

import numpy as np
from pydantic import ValidationError as PydanticValidationError
from scipy import special
from scipy.optimize import brentq

from ..core.exceptions import UnsupportedOperationError, ValidationError
from ..numerics.quadrature import Interval
from ..numerics.special import digamma, trigamma
from .linear import as_design_matrix, linear_model_geometry
from .stats import (
    BernoulliStats,
    ExponentialStats,
    GammaStats,
    LinearModelStats,
    MixtureStats,
    NormalStats,
    ShiftedExponentialStats,
    SuffStats,
)

Param = Union[float, Tuple[float, ...], np.ndarray]

LOG_2PI = math.log(2.0 * math.pi)


class FamilyId(str, Enum):
    """Registered sampling families."""

    BERNOULLI = "bernoulli"
    EXPONENTIAL_SCALE = "exponential_scale"
    NORMAL_LOCSCALE = "normal_locscale"
    SHIFTED_EXPONENTIAL = "shifted_exponential"
    NORMAL_MIXTURE = "normal_mixture"
    GAMMA_MEAN = "gamma_mean"
    LINEAR_MODEL = "linear_model"


_ALIASES: Dict[str, FamilyId] = {
    "exponential": FamilyId.EXPONENTIAL_SCALE,
    "normal": FamilyId.NORMAL_LOCSCALE,
    "irregular": FamilyId.SHIFTED_EXPONENTIAL,
    "mixture": FamilyId.NORMAL_MIXTURE,
    "gamma": FamilyId.GAMMA_MEAN,
    "linear": FamilyId.LINEAR_MODEL,
}


@dataclass(frozen=True)
class Chart:
    """Unconstrained coordinate ``u`` for a scalar parameter.

    Attributes:
        domain: Range of ``u``.
        to_theta: ``u -> θ``.
        log_jacobian: ``u -> log |dθ/du|``.
        from_theta: ``θ -> u``.
    """

    domain: Interval
    to_theta: Callable[[float], float]
    log_jacobian: Callable[[float], float]
    from_theta: Callable[[float], float]


def _identity_chart(domain: Interval) -> Chart:
    return Chart(domain=domain, to_theta=lambda u: u, log_jacobian=lambda u: 0.0, from_theta=lambda t: t)


def _safe_exp(u: float) -> float:
    return math.exp(u) if u < 709.0 else math.inf


def _log_scale_kl(d: float) -> float:
    """e^{-d} + d - 1, the exponential KL at log-ratio d."""
    if math.isnan(d):
        raise ValidationError("log-ratio is NaN", field="d", value=d)
    if math.isinf(d) or d < -700.0:
        return math.inf
    return max(math.expm1(-d) + d, 0.0)


def _scaled_exp(log_scale: float, v: float) -> float:
    """exp(log_scale - v), ``inf`` past the float range."""
    t = log_scale - v
    return math.exp(t) if t < 709.0 else math.inf


def _log_chart() -> Chart:
    return Chart(
        domain=Interval.real_line(),
        to_theta=_safe_exp,
        log_jacobian=lambda u: u,
        from_theta=math.log,
    )


@dataclass(frozen=True)
class ReferencePrior:
    """Objective estimation prior π^N(θ|ν) π^N(ν), stored through its logs.

    ``log_density_nu`` is ``None`` for families without a nuisance parameter.
    ``is_proper`` states whether π^N(θ|ν) has finite mass.
    """

    log_density_theta: Callable[..., float]
    log_density_nu: Optional[Callable[[float], float]]
    is_proper: bool

    def density_theta_given_nu(self, theta: Param, nu: Optional[float] = None) -> float:
        return math.exp(self.log_density_theta(theta, nu))

    def density_nu(self, nu: float) -> float:
        if self.log_density_nu is None:
            raise UnsupportedOperationError("family has no nuisance parameter")
        return math.exp(self.log_density_nu(nu))


def _wrap_stats(builder: Callable[[], SuffStats]) -> SuffStats:
    try:
        return builder()
    except PydanticValidationError as e:
        raise ValidationError(f"sample does not give valid statistics: {e.errors()[0]['msg']}", field="sample") from e


class FamilyDescriptor(ABC):
    """Immutable description of one sampling model.

    Subclasses set ``stats_type``, ``theta_dim``, ``has_nuisance``,
    ``flat_reference`` (π^N(θ|ν) constant in θ), the analytic tail indices per
    divergence kind and, for kinds whose prior does not exist, the reason.
    """

    family_id: FamilyId
    stats_type: Type[SuffStats]
    theta_dim: int = 1
    has_nuisance: bool = False
    flat_reference: bool = False
    tail_indices: Dict[str, float] = {}
    missing_kinds: Dict[str, str] = {}

    # identity

    @property
    def params(self) -> Dict[str, Any]:
        return {}

    @property
    def label(self) -> str:
        if not self.params:
            return self.family_id.value
        inner = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.family_id.value}({inner})"

    @property
    def cache_key(self) -> Tuple[Any, ...]:
        return (self.family_id.value,) + tuple(sorted(self.params.items()))

    def __repr__(self) -> str:
        return f"FamilyDescriptor<{self.label}>"

    # sample size

    def n_star(self, n: int) -> float:
        """Effective sample size for a sample of size ``n``."""
        return float(n)

    def unitary_scale(self) -> float:
        """Factor turning a symmetrized ``kl_unit`` value into D̄ = D/n★."""
        return 1.0 / self.n_star(1)

    # parameter space

    @abstractmethod
    def support(self, theta0: Optional[float] = None) -> Interval:
        """Parameter space of a scalar θ (the marginal space for vector θ)."""

    def in_support(self, theta: Param, theta0: Optional[float] = None) -> bool:
        """Open-support membership; never raises."""
        try:
            value = float(theta)
        except (TypeError, ValueError):
            return False
        return self.support(theta0).contains(value)

    def validate_theta(self, theta: Param, theta0: Optional[float] = None) -> None:
        value = float(theta)
        support = self.support(theta0)
        if not (support.contains(value) or value == support.lower):
            raise ValidationError(f"parameter outside the support of {self.label}", field="theta", value=value)

    def validate_stats(self, stats: SuffStats) -> None:
        if not isinstance(stats, self.stats_type):
            raise ValidationError(
                f"{self.label} expects {self.stats_type.__name__}",
                field="stats",
                value=type(stats).__name__,
            )

    def require_nu(self, nu: Optional[float]) -> float:
        if self.has_nuisance and nu is None:
            raise ValidationError(f"{self.label} needs the nuisance parameter", field="nu")
        if not self.has_nuisance and nu is not None:
            raise ValidationError(f"{self.label} has no nuisance parameter", field="nu", value=nu)
        return nu  # type: ignore[return-value]

    # model

    @abstractmethod
    def loglik(self, theta: Param, stats: SuffStats, nu: Optional[float] = None) -> float:
        """Exact log-likelihood of the full sample."""

    @abstractmethod
    def kl_unit(self, a: Param, b: Param, nu: Optional[float] = None) -> float:
        """Directed divergence ``KL[a:b]`` per observation."""

    @abstractmethod
    def fisher_unit(self, theta: Param, nu: Optional[float] = None) -> np.ndarray:
        """Per-observation Fisher information block of θ."""

    @abstractmethod
    def log_reference_theta(self, theta: Param, nu: Optional[float] = None) -> float:
        """log π^N(θ|ν), up to the constant that cancels in Bayes factors."""

    def log_reference_nu(self, nu: float) -> float:
        raise UnsupportedOperationError("family has no nuisance parameter", family=self.label)

    @property
    def reference(self) -> ReferencePrior:
        return ReferencePrior(
            log_density_theta=self.log_reference_theta,
            log_density_nu=self.log_reference_nu if self.has_nuisance else None,
            is_proper=self.reference_is_proper,
        )

    reference_is_proper: bool = False

    # log-scale families: KL depends on log a - log b only and π^N(θ|ν) ∝ 1/θ,
    # so the prior kernel is flat-referenced in x = log θ - log θ0
    log_scale: bool = False

    def kl_log_ratio(self, d: float, nu: Optional[float] = None) -> float:
        """``KL[a:b]`` per observation as a function of ``d = log a - log b``."""
        raise UnsupportedOperationError("family is not a log-scale family", family=self.label)

    def loglik_log_mean(self, v: float, stats: SuffStats, nu: Optional[float] = None) -> float:
        """Log-likelihood at log μ = ``v``, never forming μ."""
        raise UnsupportedOperationError("family is not a log-scale family", family=self.label)

    # integration support

    def chart(self, stats: Optional[SuffStats] = None, theta0: Optional[float] = None) -> Chart:
        """Chart of the scalar θ used by marginal likelihoods."""
        raise UnsupportedOperationError("no scalar chart for this family", family=self.label)

    def mle_hint(self, stats: SuffStats) -> Tuple[float, float]:
        """Approximate posterior location and width in chart coordinates."""
        raise UnsupportedOperationError("no scalar chart for this family", family=self.label)

    @abstractmethod
    def stats_from_sample(self, sample: Sequence[float]) -> SuffStats:
        """Reduce a raw sample to sufficient statistics."""


_FAMILY_REGISTRY: Dict[FamilyId, Type[FamilyDescriptor]] = {}


def register_family(family_id: FamilyId) -> Callable[[Type[FamilyDescriptor]], Type[FamilyDescriptor]]:
    """Decorator registering a descriptor class under ``family_id``.

    Usage::

        @register_family(FamilyId.BERNOULLI)
        class Bernoulli(FamilyDescriptor):
            ...
    """

    def decorator(cls: Type[FamilyDescriptor]) -> Type[FamilyDescriptor]:
        if family_id in _FAMILY_REGISTRY:
            raise ValueError(f"family {family_id.value} registered twice")
        cls.family_id = family_id
        _FAMILY_REGISTRY[family_id] = cls
        return cls

    return decorator


def resolve_family_id(name: Union[str, FamilyId]) -> FamilyId:
    """Accept registry ids, CLI spellings with hyphens and short aliases."""
    if isinstance(name, FamilyId):
        return name
    key = name.strip().lower().replace("-", "_")
    if key in _ALIASES:
        return _ALIASES[key]
    try:
        return FamilyId(key)
    except ValueError:
        known = sorted([f.value for f in FamilyId] + list(_ALIASES))
        raise ValidationError(f"unknown family; expected one of {', '.join(known)}", field="family", value=name)


def get_family(name: Union[str, FamilyId], **params: Any) -> FamilyDescriptor:
    """Instantiate a registered family.

    Args:
        name: Family id or alias.
        **params: Family parameters (``p`` for the mixture, ``side`` for the
            shifted exponential, ``X1``/``Xe`` for the linear model, ...).

    Returns:
        The family descriptor.
    """
    family_id = resolve_family_id(name)
    cls = _FAMILY_REGISTRY[family_id]
    try:
        return cls(**params)
    except TypeError as e:
        raise ValidationError(f"invalid parameters for {family_id.value}: {e}", field="family") from e


def registered_families() -> Tuple[FamilyId, ...]:
    return tuple(_FAMILY_REGISTRY)


def _finite_positive(x: float) -> bool:
    return math.isfinite(x) and x > 0.0


def _positive_sample(sample: Sequence[float], label: str) -> np.ndarray:
    y = np.asarray(sample, dtype=float)
    if y.ndim != 1 or y.size == 0:
        raise ValidationError("sample must be a non-empty vector", field="sample")
    if not np.all(np.isfinite(y)) or np.any(y <= 0):
        raise ValidationError(f"{label} observations must be positive", field="sample")
    return y


@register_family(FamilyId.BERNOULLI)
class Bernoulli(FamilyDescriptor):
    """Bernoulli(θ) with the arcsine reference prior (mass π)."""

    stats_type = BernoulliStats
    tail_indices = {"sum": 0.0, "min": 0.0}
    reference_is_proper = True

    def support(self, theta0: Optional[float] = None) -> Interval:
        return Interval(0.0, 1.0)

    def loglik(self, theta: Param, stats: SuffStats, nu: Optional[float] = None) -> float:
        self.validate_stats(stats)
        t = float(theta)
        if not 0.0 <= t <= 1.0:
            return -math.inf
        T = stats.successes
        return float(special.xlogy(T, t) + special.xlog1py(stats.n - T, -t))

    def kl_unit(self, a: Param, b: Param, nu: Optional[float] = None) -> float:
        a, b = float(a), float(b)
        if not (0.0 <= a <= 1.0 and 0.0 <= b <= 1.0):
            raise ValidationError("Bernoulli parameters lie in [0, 1]", field="theta", value=(a, b))
        with np.errstate(divide="ignore"):
            value = (
                special.xlogy(b, b) - special.xlogy(b, a)
                + special.xlog1py(1.0 - b, -b) - special.xlog1py(1.0 - b, -a)
            )
        return max(float(value), 0.0)

    def fisher_unit(self, theta: Param, nu: Optional[float] = None) -> np.ndarray:
        t = float(theta)
        return np.array([[1.0 / (t * (1.0 - t))]])

    def log_reference_theta(self, theta: Param, nu: Optional[float] = None) -> float:
        t = float(theta)
        if not 0.0 < t < 1.0:
            return -math.inf
        return -0.5 * math.log(t) - 0.5 * math.log1p(-t)

    def chart(self, stats: Optional[SuffStats] = None, theta0: Optional[float] = None) -> Chart:
        # θ = sin²u; dθ/du = sin 2u
        return Chart(
            domain=Interval(0.0, 0.5 * math.pi),
            to_theta=lambda u: math.sin(u) ** 2,
            log_jacobian=lambda u: math.log(math.sin(2.0 * u)) if 0.0 < u < 0.5 * math.pi else -math.inf,
            from_theta=lambda t: math.asin(math.sqrt(t)),
        )

    def mle_hint(self, stats: SuffStats) -> Tuple[float, float]:
        n = stats.n
        t = min(max(stats.successes / n, 0.5 / n), 1.0 - 0.5 / n)
        return math.asin(math.sqrt(t)), 0.5 / math.sqrt(n)

    def stats_from_sample(self, sample: Sequence[float]) -> SuffStats:
        y = np.asarray(sample, dtype=float)
        if y.ndim != 1 or y.size == 0 or not np.all((y == 0.0) | (y == 1.0)):
            raise ValidationError("Bernoulli sample must be a non-empty 0/1 vector", field="sample")
        return _wrap_stats(lambda: BernoulliStats(n=int(y.size), successes=float(y.sum())))


@register_family(FamilyId.EXPONENTIAL_SCALE)
class ExponentialScale(FamilyDescriptor):
    """Exponential with mean μ, parameterized by μ (``mean``) or ξ = log μ (``log``)."""

    stats_type = ExponentialStats
    tail_indices = {"sum": 0.0, "min": 1.0}
    log_scale = True

    def __init__(self, parameterization: str = "mean") -> None:
        if parameterization not in ("mean", "log"):
            raise ValidationError(
                "parameterization must be 'mean' or 'log'", field="parameterization", value=parameterization
            )
        self.parameterization = parameterization
        self.flat_reference = parameterization == "log"

    @property
    def params(self) -> Dict[str, Any]:
        return {} if self.parameterization == "mean" else {"parameterization": "log"}

    def log_mean(self, theta: Param) -> float:
        """log μ, or NaN outside the parameter space."""
        t = float(theta)
        if self.parameterization == "log":
            return t if not math.isnan(t) else math.nan
        if t <= 0.0 or math.isnan(t):
            return math.nan
        return math.log(t)

    def support(self, theta0: Optional[float] = None) -> Interval:
        return Interval.real_line() if self.parameterization == "log" else Interval.positive()

    def loglik(self, theta: Param, stats: SuffStats, nu: Optional[float] = None) -> float:
        self.validate_stats(stats)
        log_mu = self.log_mean(theta)
        if not math.isfinite(log_mu):
            return -math.inf
        return self.loglik_log_mean(log_mu, stats)

    def loglik_log_mean(self, v: float, stats: SuffStats, nu: Optional[float] = None) -> float:
        self.validate_stats(stats)
        n = stats.n
        return -n * v - n * _scaled_exp(math.log(stats.ybar), v)

    def kl_unit(self, a: Param, b: Param, nu: Optional[float] = None) -> float:
        la, lb = self.log_mean(a), self.log_mean(b)
        if math.isnan(la) or math.isnan(lb):
            raise ValidationError("exponential parameters outside the support", field="theta", value=(a, b))
        return self.kl_log_ratio(la - lb)

    def kl_log_ratio(self, d: float, nu: Optional[float] = None) -> float:
        return _log_scale_kl(d)

    def fisher_unit(self, theta: Param, nu: Optional[float] = None) -> np.ndarray:
        if self.parameterization == "log":
            return np.array([[1.0]])
        t = float(theta)
        return np.array([[1.0 / (t * t)]])

    def log_reference_theta(self, theta: Param, nu: Optional[float] = None) -> float:
        if self.parameterization == "log":
            return 0.0
        t = float(theta)
        return -math.log(t) if _finite_positive(t) else -math.inf

    def chart(self, stats: Optional[SuffStats] = None, theta0: Optional[float] = None) -> Chart:
        return _identity_chart(Interval.real_line()) if self.parameterization == "log" else _log_chart()

    def mle_hint(self, stats: SuffStats) -> Tuple[float, float]:
        return math.log(stats.ybar), 1.0 / math.sqrt(stats.n)

    def stats_from_sample(self, sample: Sequence[float]) -> SuffStats:
        y = _positive_sample(sample, "exponential")
        return _wrap_stats(lambda: ExponentialStats(n=int(y.size), ybar=float(y.mean())))


@register_family(FamilyId.NORMAL_LOCSCALE)
class NormalLocScale(FamilyDescriptor):
    """Normal(μ, σ²) testing (μ, σ) jointly, or μ alone when ``known_sigma`` is set."""

    stats_type = NormalStats

    def __init__(self, known_sigma: Optional[float] = None) -> None:
        if known_sigma is not None and not _finite_positive(float(known_sigma)):
            raise ValidationError("known_sigma must be positive", field="known_sigma", value=known_sigma)
        self.known_sigma = None if known_sigma is None else float(known_sigma)
        if self.known_sigma is None:
            self.theta_dim = 2
            self.flat_reference = False
            self.tail_indices = {"sum": 0.5}
            self.missing_kinds = {"min": "min-DB does not exist: q̲^M=∞"}
        else:
            self.theta_dim = 1
            self.flat_reference = True
            self.tail_indices = {"sum": 0.5, "min": 0.5}
            self.missing_kinds = {}

    @property
    def params(self) -> Dict[str, Any]:
        return {} if self.known_sigma is None else {"known_sigma": self.known_sigma}

    def _split(self, theta: Param) -> Tuple[float, float]:
        if self.known_sigma is not None:
            return float(theta), self.known_sigma
        mu, sigma = theta  # type: ignore[misc]
        return float(mu), float(sigma)

    def support(self, theta0: Optional[float] = None) -> Interval:
        # μ-space; σ lives on (0, ∞)
        return Interval.real_line()

    def in_support(self, theta: Param, theta0: Optional[float] = None) -> bool:
        try:
            mu, sigma = self._split(theta)
        except (TypeError, ValueError):
            return False
        return math.isfinite(mu) and _finite_positive(sigma)

    def validate_theta(self, theta: Param, theta0: Optional[float] = None) -> None:
        if self.known_sigma is None:
            try:
                mu, sigma = self._split(theta)
            except (TypeError, ValueError) as e:
                raise ValidationError("normal parameters are a (mu, sigma) pair", field="theta", value=theta) from e
            if not (math.isfinite(mu) and _finite_positive(sigma)):
                raise ValidationError("normal parameters need finite mu and sigma > 0", field="theta", value=theta)
        elif not math.isfinite(float(theta)):
            raise ValidationError("normal mean must be finite", field="theta", value=theta)

    def loglik(self, theta: Param, stats: SuffStats, nu: Optional[float] = None) -> float:
        self.validate_stats(stats)
        mu, sigma = self._split(theta)
        if not (math.isfinite(mu) and _finite_positive(sigma)):
            return -math.inf
        n = stats.n
        quad = stats.sum_squares + n * (stats.ybar - mu) ** 2
        return -0.5 * n * LOG_2PI - n * math.log(sigma) - quad / (2.0 * sigma * sigma)

    def kl_unit(self, a: Param, b: Param, nu: Optional[float] = None) -> float:
        mu_a, s_a = self._split(a)
        mu_b, s_b = self._split(b)
        if not (_finite_positive(s_a) and _finite_positive(s_b)):
            raise ValidationError("normal scales must be positive", field="theta", value=(a, b))
        ratio = s_b / s_a
        value = -math.log(ratio) + 0.5 * (ratio * ratio + ((mu_b - mu_a) / s_a) ** 2) - 0.5
        return max(value, 0.0)

    def fisher_unit(self, theta: Param, nu: Optional[float] = None) -> np.ndarray:
        _, sigma = self._split(theta)
        if self.known_sigma is not None:
            return np.array([[1.0 / sigma**2]])
        return np.diag([1.0 / sigma**2, 2.0 / sigma**2])

    def log_reference_theta(self, theta: Param, nu: Optional[float] = None) -> float:
        if self.known_sigma is not None:
            return 0.0
        _, sigma = self._split(theta)
        return -math.log(sigma) if _finite_positive(sigma) else -math.inf

    def chart(self, stats: Optional[SuffStats] = None, theta0: Optional[float] = None) -> Chart:
        if self.known_sigma is None:
            raise UnsupportedOperationError(
                "(mu, sigma) has no scalar chart; use the nested marginal", family=self.label
            )
        return _identity_chart(Interval.real_line())

    def mle_hint(self, stats: SuffStats) -> Tuple[float, float]:
        if self.known_sigma is None:
            raise UnsupportedOperationError("(mu, sigma) has no scalar chart", family=self.label)
        return stats.ybar, self.known_sigma / math.sqrt(stats.n)

    def stats_from_sample(self, sample: Sequence[float]) -> SuffStats:
        y = np.asarray(sample, dtype=float)
        if y.ndim != 1 or y.size == 0 or not np.all(np.isfinite(y)):
            raise ValidationError("normal sample must be a finite non-empty vector", field="sample")
        ybar = float(y.mean())
        s = float(np.sqrt(np.mean((y - ybar) ** 2)))
        return _wrap_stats(lambda: NormalStats(n=int(y.size), ybar=ybar, s=s, s_convention="mle"))


@register_family(FamilyId.SHIFTED_EXPONENTIAL)
class ShiftedExponential(FamilyDescriptor):
    """Exponential with unknown location θ: f(y|θ) = exp(-(y - θ)), y > θ.

    ``side="two_sided"`` tests θ = θ0 against θ ≠ θ0 on the real line;
    ``side="one_sided"`` restricts the alternative to θ > θ0.
    """

    stats_type = ShiftedExponentialStats
    flat_reference = True
    tail_indices = {"min": 1.0}
    missing_kinds = {"sum": "sum-DB does not exist: D^S is infinite for the irregular family"}

    def __init__(self, side: str = "two_sided") -> None:
        side = side.replace("-", "_")
        if side not in ("two_sided", "one_sided"):
            raise ValidationError("side must be 'two_sided' or 'one_sided'", field="side", value=side)
        self.side = side

    @property
    def params(self) -> Dict[str, Any]:
        return {"side": self.side}

    @property
    def label(self) -> str:
        return f"{self.family_id.value}({self.side})"

    def support(self, theta0: Optional[float] = None) -> Interval:
        if self.side == "one_sided":
            if theta0 is None:
                raise ValidationError("the one-sided support needs theta0", field="theta0")
            return Interval(float(theta0), math.inf)
        return Interval.real_line()

    def in_support(self, theta: Param, theta0: Optional[float] = None) -> bool:
        # the one-sided space [θ0, ∞) is closed at θ0
        if self.side == "one_sided" and theta0 is not None and float(theta) == float(theta0):
            return True
        return super().in_support(theta, theta0)

    def loglik(self, theta: Param, stats: SuffStats, nu: Optional[float] = None) -> float:
        self.validate_stats(stats)
        t = float(theta)
        if not math.isfinite(t) or t > stats.tmin:
            return -math.inf
        return stats.n * (t - stats.mean)

    def kl_unit(self, a: Param, b: Param, nu: Optional[float] = None) -> float:
        a, b = float(a), float(b)
        return b - a if a <= b else math.inf

    def fisher_unit(self, theta: Param, nu: Optional[float] = None) -> np.ndarray:
        raise UnsupportedOperationError("the irregular family has no Fisher information", family=self.label)

    def log_reference_theta(self, theta: Param, nu: Optional[float] = None) -> float:
        return 0.0

    def chart(self, stats: Optional[SuffStats] = None, theta0: Optional[float] = None) -> Chart:
        if stats is None:
            return _identity_chart(self.support(theta0))
        lower = self.support(theta0).lower
        if not stats.tmin > lower:
            raise ValidationError(
                "the sample minimum must exceed the lower end of the support", field="tmin", value=stats.tmin
            )
        return _identity_chart(Interval(lower, stats.tmin))

    def mle_hint(self, stats: SuffStats) -> Tuple[float, float]:
        return stats.tmin, 1.0 / stats.n

    def stats_from_sample(self, sample: Sequence[float]) -> SuffStats:
        y = np.asarray(sample, dtype=float)
        if y.ndim != 1 or y.size == 0 or not np.all(np.isfinite(y)):
            raise ValidationError("sample must be a finite non-empty vector", field="sample")
        return _wrap_stats(lambda: ShiftedExponentialStats(n=int(y.size), tmin=float(y.min()), ybar=float(y.mean())))


@register_family(FamilyId.NORMAL_MIXTURE)
class NormalMixture(FamilyDescriptor):
    """p N(0, 1) + (1 - p) N(μ, 1) with known weight p.

    ``divergence_mode`` selects the exact G-function quadrature or its Laplace
    closed form for D̄^S.
    """

    stats_type = MixtureStats
    flat_reference = True
    tail_indices = {"sum": 0.5}
    missing_kinds = {"min": "min-DB does not exist: q̲^M=∞"}

    def __init__(self, p: float = 0.5, divergence_mode: str = "laplace") -> None:
        p = float(p)
        if not 0.0 < p < 1.0:
            raise ValidationError("mixture weight p must lie in (0, 1)", field="p", value=p)
        if divergence_mode not in ("exact", "laplace"):
            raise ValidationError(
                "divergence_mode must be 'exact' or 'laplace'", field="divergence_mode", value=divergence_mode
            )
        self.p = p
        self.divergence_mode = divergence_mode

    @property
    def params(self) -> Dict[str, Any]:
        return {"p": self.p, "divergence_mode": self.divergence_mode}

    def n_star(self, n: int) -> float:
        return n * (1.0 - self.p)

    def support(self, theta0: Optional[float] = None) -> Interval:
        return Interval.real_line()

    def loglik(self, theta: Param, stats: SuffStats, nu: Optional[float] = None) -> float:
        self.validate_stats(stats)
        mu = float(theta)
        y = np.asarray(stats.sample)
        base = float(np.sum(-0.5 * y * y)) - 0.5 * stats.n * LOG_2PI
        if not math.isfinite(mu):
            return base + stats.n * math.log(self.p)
        terms = np.logaddexp(math.log(self.p), math.log1p(-self.p) + y * mu - 0.5 * mu * mu)
        return base + float(np.sum(terms))

    def kl_unit(self, a: Param, b: Param, nu: Optional[float] = None) -> float:
        raise UnsupportedOperationError(
            "the mixture has no per-observation closed form; use mixture_divergence", family=self.label
        )

    def fisher_unit(self, theta: Param, nu: Optional[float] = None) -> np.ndarray:
        if float(theta) != 0.0:
            raise UnsupportedOperationError("mixture Fisher information is only available at mu = 0", family=self.label)
        return np.array([[(1.0 - self.p) ** 2]])

    def log_reference_theta(self, theta: Param, nu: Optional[float] = None) -> float:
        return 0.0

    def chart(self, stats: Optional[SuffStats] = None, theta0: Optional[float] = None) -> Chart:
        return _identity_chart(Interval.real_line())

    def mle_hint(self, stats: SuffStats) -> Tuple[float, float]:
        q = 1.0 - self.p
        return float(np.mean(stats.sample)) / q, max(1.0 / (q * math.sqrt(stats.n)), 0.5)

    def stats_from_sample(self, sample: Sequence[float]) -> SuffStats:
        y = np.asarray(sample, dtype=float)
        if y.ndim != 1 or y.size == 0 or not np.all(np.isfinite(y)):
            raise ValidationError("mixture sample must be a finite non-empty vector", field="sample")
        return _wrap_stats(lambda: MixtureStats.of(y))


@register_family(FamilyId.GAMMA_MEAN)
class GammaMean(FamilyDescriptor):
    """Gamma with mean μ (tested) and shape α (nuisance, orthogonal to μ)."""

    stats_type = GammaStats
    has_nuisance = True
    log_scale = True
    tail_indices = {"sum": 0.0, "min": 1.0}

    def support(self, theta0: Optional[float] = None) -> Interval:
        return Interval.positive()

    def loglik(self, theta: Param, stats: SuffStats, nu: Optional[float] = None) -> float:
        mu = float(theta)
        if not _finite_positive(mu):
            self.validate_stats(stats)
            return -math.inf
        return self.loglik_log_mean(math.log(mu), stats, nu)

    def loglik_log_mean(self, v: float, stats: SuffStats, nu: Optional[float] = None) -> float:
        self.validate_stats(stats)
        alpha = float(self.require_nu(nu))
        if not (_finite_positive(alpha) and math.isfinite(v)):
            return -math.inf
        log_alpha = math.log(alpha)
        per_obs = (
            alpha * (log_alpha - v)
            - float(special.gammaln(alpha))
            + (alpha - 1.0) * stats.logmean
            - _scaled_exp(log_alpha + math.log(stats.ybar), v)
        )
        return stats.n * per_obs

    def kl_unit(self, a: Param, b: Param, nu: Optional[float] = None) -> float:
        a, b = float(a), float(b)
        if not (a > 0 and b > 0):
            raise ValidationError("gamma parameters must be positive", field="theta", value=(a, b, nu))
        return self.kl_log_ratio(math.log(a) - math.log(b), nu)

    def kl_log_ratio(self, d: float, nu: Optional[float] = None) -> float:
        alpha = float(self.require_nu(nu))
        if not alpha > 0:
            raise ValidationError("gamma shape must be positive", field="nu", value=nu)
        return alpha * _log_scale_kl(d)

    def fisher_unit(self, theta: Param, nu: Optional[float] = None) -> np.ndarray:
        alpha = float(self.require_nu(nu))
        mu = float(theta)
        return np.array([[alpha / (mu * mu)]])

    def fisher_nu(self, alpha: float) -> float:
        """Per-observation Fisher information of α; underflows to 0 for huge α."""
        if alpha > 1e4:
            # ψ1(α) - 1/α loses every digit to cancellation here
            inv = 1.0 / alpha
            return (0.5 * inv) * inv * (1.0 + inv / 3.0 - inv**3 / 15.0)
        log_info = self.log_fisher_nu(alpha)
        return math.exp(log_info) if log_info < 709.0 else math.inf

    def log_fisher_nu(self, alpha: float) -> float:
        """log of :meth:`fisher_nu`, finite for every positive finite α."""
        if alpha > 1e4:
            inv = 1.0 / alpha
            return math.log(0.5) - 2.0 * math.log(alpha) + math.log1p(inv / 3.0 - inv**3 / 15.0)
        if alpha < 1.0:
            # ψ1(α) = 1/α² + ψ1(1 + α)
            return -2.0 * math.log(alpha) + math.log1p(alpha * (alpha * trigamma(1.0 + alpha) - 1.0))
        info = trigamma(alpha) - 1.0 / alpha
        return math.log(info) if info > 0.0 else -math.inf

    def log_reference_theta(self, theta: Param, nu: Optional[float] = None) -> float:
        mu = float(theta)
        return -math.log(mu) if _finite_positive(mu) else -math.inf

    def log_reference_nu(self, nu: float) -> float:
        alpha = float(nu)
        if not _finite_positive(alpha):
            return -math.inf
        return 0.5 * self.log_fisher_nu(alpha)

    def chart(self, stats: Optional[SuffStats] = None, theta0: Optional[float] = None) -> Chart:
        return _log_chart()

    def nuisance_chart(self) -> Chart:
        return _log_chart()

    def mle(self, stats: GammaStats) -> Tuple[float, float]:
        """Maximum likelihood (μ̂, α̂) from the sufficient statistics."""
        gap = math.log(stats.ybar) - stats.logmean
        if gap <= 0.0:
            raise ValidationError("degenerate gamma sample: logmean equals log(ybar)", field="logmean")

        def score(log_alpha: float) -> float:
            alpha = math.exp(log_alpha)
            return math.log(alpha) - digamma(alpha) - gap

        alpha = math.exp(brentq(score, -30.0, 30.0, xtol=1e-14))
        return stats.ybar, alpha

    def mle_hint(self, stats: SuffStats) -> Tuple[float, float]:
        _, alpha = self.mle(stats)
        return math.log(stats.ybar), 1.0 / math.sqrt(stats.n * alpha)

    def stats_from_sample(self, sample: Sequence[float]) -> SuffStats:
        y = _positive_sample(sample, "gamma")
        return _wrap_stats(lambda: GammaStats(n=int(y.size), ybar=float(y.mean()), logmean=float(np.mean(np.log(y)))))


def gamma_mle_to_suffstats(mle_mean: float, mle_sd: float, n: int) -> GammaStats:
    """Rebuild gamma sufficient statistics from the MLE of mean and sd.

    Uses σ = μ/√α and the shape score equation ``log α - ψ(α) = log ȳ - logmean``.

    Args:
        mle_mean: MLE of the mean.
        mle_sd: MLE of the standard deviation.
        n: Sample size.

    Returns:
        GammaStats whose MLE is ``(mle_mean, (mle_mean / mle_sd)**2)``.
    """
    if not (_finite_positive(mle_mean) and _finite_positive(mle_sd)):
        raise ValidationError("gamma MLEs must be positive", field="mle", value=(mle_mean, mle_sd))
    alpha = (mle_mean / mle_sd) ** 2
    logmean = math.log(mle_mean) - (math.log(alpha) - digamma(alpha))
    return _wrap_stats(lambda: GammaStats(n=n, ybar=mle_mean, logmean=logmean))


@register_family(FamilyId.LINEAR_MODEL)
class LinearModel(FamilyDescriptor):
    """Normal linear model y = X1 β1 + Xe βe + ε testing βe = 0.

    θ is the tested block βe, ν is σ. The common block is reparameterized to
    be orthogonal to βe, so divergences depend on ``V = (I - P1) Xe`` only.
    """

    stats_type = LinearModelStats
    has_nuisance = True
    flat_reference = True

    def __init__(self, X1: Any, Xe: Any) -> None:
        geometry = linear_model_geometry(X1, Xe)
        if geometry.k_e == 0:
            raise ValidationError("linear model needs at least one tested coefficient", field="Xe")
        self.X1 = as_design_matrix(X1, "X1")
        self.Xe = as_design_matrix(Xe, "Xe")
        self.geometry = geometry
        self.theta_dim = geometry.k_e
        self.tail_indices = {"sum": geometry.k_e / 2.0, "min": geometry.k_e / 2.0}

    @property
    def n_rows(self) -> int:
        return self.Xe.shape[0]

    @property
    def params(self) -> Dict[str, Any]:
        return {"p1": self.X1.shape[1], "k_e": self.geometry.k_e, "n": self.n_rows}

    @property
    def cache_key(self) -> Tuple[Any, ...]:
        return (self.family_id.value, self.X1.tobytes(), self.Xe.tobytes(), self.X1.shape, self.Xe.shape)

    def support(self, theta0: Optional[float] = None) -> Interval:
        return Interval.real_line()

    def in_support(self, theta: Param, theta0: Optional[float] = None) -> bool:
        try:
            beta = np.atleast_1d(np.asarray(theta, dtype=float))
        except (TypeError, ValueError):
            return False
        return beta.shape == (self.geometry.k_e,) and bool(np.all(np.isfinite(beta)))

    def validate_theta(self, theta: Param, theta0: Optional[float] = None) -> None:
        beta = np.atleast_1d(np.asarray(theta, dtype=float))
        if beta.shape != (self.geometry.k_e,) or not np.all(np.isfinite(beta)):
            raise ValidationError(f"tested block must be a finite vector of length {self.geometry.k_e}", field="theta")

    def validate_stats(self, stats: SuffStats) -> None:
        super().validate_stats(stats)
        if stats.n != self.n_rows:
            raise ValidationError("response length must match the design", field="y", value=stats.n)

    def loglik(self, theta: Param, stats: SuffStats, nu: Optional[float] = None) -> float:
        """Exact log-likelihood at ``theta = (beta1, beta_e)`` and ``nu = sigma``."""
        self.validate_stats(stats)
        sigma = float(self.require_nu(nu))
        beta1, beta_e = theta  # type: ignore[misc]
        if not _finite_positive(sigma):
            return -math.inf
        beta1 = np.atleast_1d(np.asarray(beta1, dtype=float))
        beta_e = np.atleast_1d(np.asarray(beta_e, dtype=float))
        mean = self.X1 @ beta1 + self.Xe @ beta_e
        resid = np.asarray(stats.y) - mean
        n = stats.n
        return -0.5 * n * LOG_2PI - n * math.log(sigma) - float(resid @ resid) / (2.0 * sigma * sigma)

    def kl_unit(self, a: Param, b: Param, nu: Optional[float] = None) -> float:
        """Full-sample divergence; ``n_star`` is n, so D̄ = VᵗV/(nσ²) quadratic form."""
        sigma = float(self.require_nu(nu))
        diff = np.atleast_1d(np.asarray(a, dtype=float)) - np.atleast_1d(np.asarray(b, dtype=float))
        return float(diff @ self.geometry.VtV @ diff) / (2.0 * sigma * sigma)

    def unitary_scale(self) -> float:
        return 1.0 / self.n_rows

    def fisher_unit(self, theta: Param, nu: Optional[float] = None) -> np.ndarray:
        sigma = float(self.require_nu(nu))
        return self.geometry.VtV / (self.n_rows * sigma * sigma)

    def log_reference_theta(self, theta: Param, nu: Optional[float] = None) -> float:
        return 0.0

    def log_reference_nu(self, nu: float) -> float:
        sigma = float(nu)
        return -math.log(sigma) if _finite_positive(sigma) else -math.inf

    def stats_from_sample(self, sample: Sequence[float]) -> SuffStats:
        y = np.asarray(sample, dtype=float)
        if y.ndim != 1 or not np.all(np.isfinite(y)):
            raise ValidationError("response must be a finite vector", field="y")
        stats = _wrap_stats(lambda: LinearModelStats(n=int(y.size), y=tuple(float(v) for v in y)))
        self.validate_stats(stats)
        return stats
