"""
Adaptive quadrature on bounded and unbounded intervals.

Unbounded intervals are mapped onto finite ones by rational transforms
(``x = c + s t / (1 - t^2)`` on the real line, ``x = a + s t / (1 - t)`` on a
half-line) and handed to QUADPACK through :func:`scipy.integrate.quad`. The
transforms keep polynomial tails polynomial, which the integrability probe
relies on.
"""

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate as sp_integrate
from scipy.optimize import minimize_scalar

from ..core.exceptions import NumericalError, ProbeError, QuadratureError, ValidationError
from ..core.logger import get_logger

logger = get_logger(__name__)

DEFAULT_REL_TOL = 1e-8
DEFAULT_ACCEPT_REL_TOL = 1e-6
DEFAULT_LIMIT = 500
DEFAULT_GRID = 401

RealFunction = Callable[[float], float]


class EmptyIntegrandError(NumericalError):
    """The log-integrand is -inf at every point of the search grid."""


@dataclass(frozen=True)
class Interval:
    """Integration domain; either end may be infinite."""

    lower: float
    upper: float

    def __post_init__(self) -> None:
        if math.isnan(self.lower) or math.isnan(self.upper) or not self.lower < self.upper:
            raise ValidationError(
                "Interval requires lower < upper",
                field="interval",
                value=(self.lower, self.upper),
            )

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(-math.inf, math.inf)

    @classmethod
    def positive(cls) -> "Interval":
        return cls(0.0, math.inf)

    @property
    def lower_finite(self) -> bool:
        return math.isfinite(self.lower)

    @property
    def upper_finite(self) -> bool:
        return math.isfinite(self.upper)

    @property
    def bounded(self) -> bool:
        return self.lower_finite and self.upper_finite

    def contains(self, x: float) -> bool:
        """Open-interval membership."""
        return self.lower < x < self.upper


@dataclass(frozen=True)
class QuadratureResult:
    """Integral value, QUADPACK error estimate and convergence flag."""

    value: float
    abs_err: float
    converged: bool
    evaluations: int = 0

    def acceptable(self, rel_tol: float, abs_tol: float = 0.0) -> bool:
        return (
            math.isfinite(self.value)
            and math.isfinite(self.abs_err)
            and self.abs_err <= max(rel_tol * abs(self.value), abs_tol)
        )

    def require(self, rel_tol: float, what: str) -> float:
        """Return the value, or raise if the error exceeds ``rel_tol``.

        Args:
            rel_tol: Accepted relative error.
            what: Description used in the error message.

        Returns:
            The integral value.

        Raises:
            QuadratureError: If the result is not acceptable.
        """
        if not self.acceptable(rel_tol):
            raise QuadratureError(f"{what} did not converge", result=self)
        return self.value


@dataclass(frozen=True)
class Peak:
    """Mode, curvature width and log-height of a log-integrand."""

    mode: float
    width: float
    log_max: float


@dataclass(frozen=True)
class LogIntegral:
    """``log ∫ exp(log_f)`` computed relative to the peak height.

    An integrand that vanishes identically has ``log_value == -inf`` and no
    peak or quadrature result.
    """

    log_value: float
    rel_err: float
    peak: Optional[Peak]
    result: Optional[QuadratureResult]

    def require(self, rel_tol: float, what: str) -> float:
        if self.log_value == -math.inf and self.peak is None:
            return self.log_value
        if not (math.isfinite(self.log_value) and self.rel_err <= rel_tol):
            raise QuadratureError(f"{what} did not converge", result=self.result)
        return self.log_value


class _Chart:
    """Maps a finite t-interval onto the integration domain."""

    def __init__(self, domain: Interval, center: Optional[float], scale: Optional[float]) -> None:
        self.domain = domain
        self.scale = float(scale) if scale and scale > 0 else 1.0
        if domain.bounded:
            self.kind = "identity"
            self.t_lower, self.t_upper = domain.lower, domain.upper
        elif not domain.lower_finite and not domain.upper_finite:
            self.kind = "line"
            self.center = 0.0 if center is None else float(center)
            self.t_lower, self.t_upper = -1.0, 1.0
        elif domain.lower_finite:
            self.kind = "upper_tail"
            self.t_lower, self.t_upper = 0.0, 1.0
        else:
            self.kind = "lower_tail"
            self.t_lower, self.t_upper = 0.0, 1.0

    def x(self, t: float) -> float:
        if self.kind == "identity":
            return t
        if self.kind == "line":
            return self.center + self.scale * t / (1.0 - t * t)
        if self.kind == "upper_tail":
            return self.domain.lower + self.scale * t / (1.0 - t)
        return self.domain.upper - self.scale * t / (1.0 - t)

    def dxdt(self, t: float) -> float:
        if self.kind == "identity":
            return 1.0
        if self.kind == "line":
            return self.scale * (1.0 + t * t) / (1.0 - t * t) ** 2
        return self.scale / (1.0 - t) ** 2

    def t_of(self, x: float) -> float:
        if self.kind == "identity":
            return x
        if self.kind == "line":
            y = (x - self.center) / self.scale
            return 2.0 * y / (1.0 + math.sqrt(1.0 + 4.0 * y * y))
        if self.kind == "upper_tail":
            y = (x - self.domain.lower) / self.scale
        else:
            y = (self.domain.upper - x) / self.scale
        return y / (1.0 + y)


def _checked(f: RealFunction, x: float, label: str) -> float:
    value = float(f(x))
    if math.isnan(value):
        raise NumericalError(f"{label} returned NaN", point=x)
    return value


def integrate(
    f: RealFunction,
    domain: Interval,
    rel_tol: float = DEFAULT_REL_TOL,
    *,
    abs_tol: float = 0.0,
    center: Optional[float] = None,
    scale: Optional[float] = None,
    points: Optional[Iterable[float]] = None,
    limit: int = DEFAULT_LIMIT,
) -> QuadratureResult:
    """Integrate ``f`` over ``domain``.

    Args:
        f: Integrand, finite on the open domain.
        domain: Integration interval.
        rel_tol: Requested relative tolerance.
        abs_tol: Requested absolute tolerance.
        center: Centre of the real-line transform.
        scale: Length scale of the transform on unbounded domains.
        points: Break points in x-coordinates (mapped through the transform).
        limit: Subdivision budget.

    Returns:
        QuadratureResult; ``converged`` is false when the budget ran out.

    Raises:
        NumericalError: If ``f`` returns NaN.
    """
    if not rel_tol > 0:
        raise ValidationError("rel_tol must be positive", field="rel_tol", value=rel_tol)

    chart = _Chart(domain, center, scale)
    evaluations = 0

    def integrand(t: float) -> float:
        nonlocal evaluations
        if t <= chart.t_lower or t >= chart.t_upper:
            return 0.0
        x = chart.x(t)
        evaluations += 1
        value = _checked(f, x, "integrand")
        if value == 0.0:
            return 0.0
        return value * chart.dxdt(t)

    breaks: Optional[List[float]] = None
    if points is not None:
        mapped = sorted(
            {chart.t_of(p) for p in points if math.isfinite(p) and domain.contains(p)}
        )
        breaks = [t for t in mapped if chart.t_lower < t < chart.t_upper] or None

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sp_integrate.IntegrationWarning)
        out = sp_integrate.quad(
            integrand,
            chart.t_lower,
            chart.t_upper,
            epsabs=abs_tol,
            epsrel=rel_tol,
            limit=limit,
            points=breaks,
            full_output=1,
        )

    value, abs_err = float(out[0]), float(out[1])
    converged = (
        math.isfinite(value)
        and math.isfinite(abs_err)
        and abs_err <= max(rel_tol * abs(value), abs_tol)
    )
    if not converged:
        logger.debug(
            f"quadrature on [{domain.lower}, {domain.upper}] stopped at {value:.6g} +- {abs_err:.3g} "
            f"after {evaluations} evaluations"
        )
    return QuadratureResult(value=value, abs_err=abs_err, converged=converged, evaluations=evaluations)


def _curvature_width(log_f: RealFunction, x: float, h: float, domain: Interval) -> Optional[float]:
    if not (domain.contains(x - h) and domain.contains(x + h)):
        return None
    f0 = _checked(log_f, x, "log-integrand")
    fp = _checked(log_f, x + h, "log-integrand")
    fm = _checked(log_f, x - h, "log-integrand")
    if not all(math.isfinite(v) for v in (f0, fp, fm)):
        return None
    d2 = (fp - 2.0 * f0 + fm) / (h * h)
    if not d2 < 0.0:
        return None
    return 1.0 / math.sqrt(-d2)


def locate_peak(
    log_f: RealFunction,
    domain: Interval,
    *,
    hint: Optional[float] = None,
    hint_scale: float = 1.0,
    grid_size: int = DEFAULT_GRID,
) -> Peak:
    """Find the maximum of a log-integrand and its curvature width.

    The search runs on a uniform grid in the transform coordinate (so the whole
    of an unbounded domain is covered) and is refined with a bounded Brent step.

    Args:
        log_f: Log of a nonnegative integrand; ``-inf`` is allowed.
        domain: Search domain.
        hint: Expected location of the mode.
        hint_scale: Expected width, used as the transform scale.
        grid_size: Number of interior grid points.

    Returns:
        Peak with mode, width and log-height.

    Raises:
        NumericalError: If ``log_f`` is NaN somewhere or ``-inf`` everywhere.
    """
    chart = _Chart(domain, hint, hint_scale)
    ts = np.linspace(chart.t_lower, chart.t_upper, grid_size + 2)[1:-1]
    xs = np.array([chart.x(t) for t in ts])
    values = np.array([_checked(log_f, x, "log-integrand") for x in xs])

    if not np.any(np.isfinite(values)):
        raise EmptyIntegrandError("log-integrand is -inf on the whole search grid", point=hint)

    i = int(np.nanargmax(np.where(np.isfinite(values), values, -np.inf)))
    lo = xs[i - 1] if i > 0 else (domain.lower if domain.lower_finite else xs[0] - (xs[1] - xs[0]))
    hi = xs[i + 1] if i + 1 < len(xs) else (domain.upper if domain.upper_finite else xs[-1] + (xs[-1] - xs[-2]))

    def negated(x: float) -> float:
        value = _checked(log_f, x, "log-integrand")
        return -value if math.isfinite(value) else math.inf

    mode, log_max = float(xs[i]), float(values[i])
    refined = minimize_scalar(
        negated,
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12 * max(1.0, abs(mode)) + 1e-6 * (hi - lo)},
    )
    if math.isfinite(refined.fun) and -refined.fun > log_max:
        mode, log_max = float(refined.x), float(-refined.fun)

    width = _curvature_width(log_f, mode, (hi - lo) / 8.0, domain)
    if width is not None:
        width = _curvature_width(log_f, mode, width / 4.0, domain) or width
    if width is None:
        width = (hi - lo) / 2.0
    if domain.bounded:
        width = min(width, domain.upper - domain.lower)

    return Peak(mode=mode, width=float(width), log_max=log_max)


def integrate_log(
    log_f: RealFunction,
    domain: Interval,
    rel_tol: float = DEFAULT_REL_TOL,
    *,
    hint: Optional[float] = None,
    hint_scale: float = 1.0,
    grid_size: int = DEFAULT_GRID,
    limit: int = DEFAULT_LIMIT,
    allow_zero: bool = False,
    points: Optional[Iterable[float]] = None,
) -> LogIntegral:
    """Compute ``log ∫ exp(log_f(x)) dx`` without overflow or underflow.

    Args:
        log_f: Log-integrand.
        domain: Integration domain.
        rel_tol: Requested relative tolerance.
        hint: Expected mode location.
        hint_scale: Expected width.
        grid_size: Grid size of the peak search.
        limit: Subdivision budget.
        allow_zero: Return ``log_value = -inf`` instead of raising when
            ``log_f`` is -inf on the whole search grid.
        points: Extra break points, such as secondary modes or kinks.

    Returns:
        LogIntegral with the log-value and relative error.

    Raises:
        EmptyIntegrandError: If ``log_f`` vanishes on the grid and
            ``allow_zero`` is false.
    """
    try:
        peak = locate_peak(log_f, domain, hint=hint, hint_scale=hint_scale, grid_size=grid_size)
    except EmptyIntegrandError:
        if not allow_zero:
            raise
        return LogIntegral(log_value=-math.inf, rel_err=0.0, peak=None, result=None)
    breaks = [peak.mode + k * peak.width for k in (-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0)]
    if points is not None:
        breaks.extend(float(p) for p in points)

    if domain.bounded or not (domain.lower_finite or domain.upper_finite):
        center, scale = peak.mode, 2.0 * peak.width
    else:
        end = domain.lower if domain.lower_finite else domain.upper
        center, scale = None, max(2.0 * peak.width, abs(peak.mode - end))

    def shifted(x: float) -> float:
        return float(np.exp(_checked(log_f, x, "log-integrand") - peak.log_max))

    result = integrate(
        shifted, domain, rel_tol, center=center, scale=scale, points=breaks, limit=limit
    )
    if not (result.value > 0 and math.isfinite(result.value)):
        return LogIntegral(log_value=math.nan, rel_err=math.inf, peak=peak, result=result)
    return LogIntegral(
        log_value=peak.log_max + math.log(result.value),
        rel_err=result.abs_err / result.value,
        peak=peak,
        result=result,
    )


class Integrability(str, Enum):
    """Outcome of :func:`probe_integrability`."""

    CONVERGENT = "convergent"
    DIVERGENT = "divergent"


def _default_anchor(domain: Interval) -> float:
    if domain.bounded:
        return 0.5 * (domain.lower + domain.upper)
    if domain.lower_finite:
        return domain.lower + 1.0
    if domain.upper_finite:
        return domain.upper - 1.0
    return 0.0


def _cutoffs(anchor: float, end: float, decades: int) -> List[float]:
    """Geometric cutoffs from the anchor toward one end of the domain."""
    if math.isinf(end):
        sign = 1.0 if end > 0 else -1.0
        return [anchor] + [anchor + sign * 10.0**k for k in range(0, decades + 1)]
    return [anchor] + [end - (end - anchor) * 10.0 ** (-k) for k in range(1, decades + 1)]


def _piece(g: RealFunction, a: float, b: float) -> float:
    lo, hi = (a, b) if a < b else (b, a)
    if not lo < hi:
        return 0.0
    result = integrate(g, Interval(lo, hi), rel_tol=1e-8)
    return result.value if math.isfinite(result.value) else math.inf


def _check_monotone(g: RealFunction, cuts: Sequence[float], end: float) -> None:
    """Refuse integrands that keep oscillating toward an end."""
    a, b = cuts[-4], cuts[-1]
    if math.isinf(end):
        origin = cuts[0]
        sign = 1.0 if end > 0 else -1.0
        xs = origin + sign * np.geomspace(abs(a - origin), abs(b - origin), 48)
    else:
        sign = 1.0 if end > cuts[0] else -1.0
        xs = end - sign * np.geomspace(abs(end - a), abs(end - b), 48)
    values = np.array([_checked(g, float(x), "probe integrand") for x in xs])
    diffs = np.diff(values)
    scale = np.maximum(np.abs(values[1:]), np.abs(values[:-1]))
    significant = diffs[np.abs(diffs) > 1e-6 * scale + 1e-300]
    changes = int(np.sum(np.diff(np.sign(significant)) != 0))
    if changes > 2:
        raise ProbeError(
            "integrand is not eventually monotone",
            diagnostic=f"{changes} sign changes of the increments on [{a:.3g}, {b:.3g}]",
        )


def _decay_exponent(increments: np.ndarray, ks: np.ndarray) -> float:
    """Exponent p of the best fit ``I_k ≈ C (k + k0)^-p`` over a grid of offsets.

    Increments of ``1/(x log^p x)``-type tails follow this law in the decade
    index with an offset that a plain log-log fit would absorb into ``p``.
    """
    logs = np.log(increments)
    best_resid, best_exponent = math.inf, 0.0
    for k0 in np.linspace(-0.9, 10.0, 219):
        x = np.log(ks + k0)
        slope, intercept = np.polyfit(x, logs, 1)
        resid = float(np.sum((logs - (slope * x + intercept)) ** 2))
        if resid < best_resid:
            best_resid, best_exponent = resid, -float(slope)
    return best_exponent


def _classify_end(increments: Sequence[float], total: float, rel_tol: float) -> Tuple[Integrability, str]:
    inc = np.asarray(increments, dtype=float)
    if not np.all(np.isfinite(inc)):
        return Integrability.DIVERGENT, "non-finite increment"
    if inc[-1] <= rel_tol * total:
        return Integrability.CONVERGENT, "increments below tolerance"
    if np.any(inc[-5:] <= 0.0):
        return Integrability.CONVERGENT, "increments vanish"
    ratios = inc[-4:] / inc[-5:-1]
    if float(ratios.max() - ratios.min()) < 0.02:
        ratio = float(ratios.mean())
        verdict = Integrability.CONVERGENT if ratio < 0.95 else Integrability.DIVERGENT
        return verdict, f"geometric increments, ratio {ratio:.4f}"
    tail = inc[2:]
    if np.any(tail <= 0.0):
        tail = inc[-5:]
    ks = np.arange(len(inc) - len(tail) + 1, len(inc) + 1, dtype=float)
    exponent = _decay_exponent(tail, ks)
    verdict = Integrability.CONVERGENT if exponent > 1.05 else Integrability.DIVERGENT
    return verdict, f"increments decay like k^-{exponent:.3f}"


def probe_integrability(
    g: RealFunction,
    domain: Interval,
    rel_tol: float = 1e-6,
    *,
    anchor: Optional[float] = None,
    decades: int = 8,
) -> Integrability:
    """Classify ``∫ g`` over ``domain`` as convergent or divergent.

    Truncated integrals are computed at geometric cutoffs ``10^k`` (toward an
    infinite end) or ``10^-k`` (toward a finite end) from ``anchor``; the growth
    of the decade increments decides each end.

    Args:
        g: Nonnegative integrand, eventually monotone toward each end.
        domain: Integration domain.
        rel_tol: Increments below ``rel_tol`` times the running total count as settled.
        anchor: Interior reference point for the cutoffs.
        decades: Number of decades probed toward each end.

    Returns:
        Integrability verdict; divergent if either end diverges.

    Raises:
        ProbeError: If ``g`` oscillates toward an end.
    """
    if decades < 6:
        raise ValidationError("probe needs at least six decades", field="decades", value=decades)
    anchor = _default_anchor(domain) if anchor is None else float(anchor)
    if not domain.contains(anchor):
        raise ValidationError("probe anchor must lie inside the domain", field="anchor", value=anchor)

    ends = []
    for end in (domain.lower, domain.upper):
        cuts = _cutoffs(anchor, end, decades)
        _check_monotone(g, cuts, end)
        increments = [_piece(g, a, b) for a, b in zip(cuts[1:-1], cuts[2:])]
        ends.append((cuts, increments))

    core = _piece(g, ends[0][0][1], ends[1][0][1])
    total = core + sum(sum(inc) for _, inc in ends)

    verdicts = []
    for (cuts, increments), label in zip(ends, ("lower", "upper")):
        verdict, reason = _classify_end(increments, total, rel_tol)
        logger.debug(f"probe {label} end toward {cuts[-1]}: {verdict.value} ({reason})")
        verdicts.append(verdict)

    if Integrability.DIVERGENT in verdicts:
        return Integrability.DIVERGENT
    return Integrability.CONVERGENT
