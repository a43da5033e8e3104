"""
Tail index q̲ = inf{q ≥ 0 : c(q) < ∞}.

The value comes from the family table and is checked against the
integrability probe on a one-dimensional slice of the kernel: convergent at
q̲ + 1/4 and divergent at max(q̲ - 1/4, q̲/2). Verified values are cached.
"""

import math
import threading
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ..core.exceptions import ProbeError
from ..core.logger import get_logger
from ..divergence import DivergenceKind, UnitaryDivergence, unitary
from ..models.families import FamilyDescriptor, GammaMean, LinearModel, NormalLocScale, Param
from ..numerics.quadrature import Integrability, Interval, integrate, probe_integrability
from .kernels import log_poly_kernel

logger = get_logger(__name__)

_CACHE: Dict[Tuple[Any, ...], float] = {}
_CACHE_LOCK = threading.Lock()

Slice = Tuple[Callable[[float], float], Interval, Optional[float]]


def _theta_key(theta0: Param) -> Tuple[float, ...]:
    return tuple(float(v) for v in np.atleast_1d(np.asarray(theta0, dtype=float)))


def _scalar_slice(divergence: UnitaryDivergence, q: float, nu: Optional[float]) -> Slice:
    family, theta0 = divergence.family, divergence.theta0
    domain = family.support(theta0)

    def g(theta: float) -> float:
        if not family.in_support(theta, theta0):
            return 0.0
        return math.exp(log_poly_kernel(divergence(theta, nu), q) + family.log_reference_theta(theta, nu))

    anchor = float(theta0) if domain.contains(float(theta0)) else None
    return g, domain, anchor


def _normal_slices(divergence: UnitaryDivergence, q: float) -> List[Slice]:
    """μ at σ = σ0, then σ with the μ-integral done by quadrature."""
    mu0, sigma0 = (float(v) for v in divergence.theta0)  # type: ignore[union-attr]

    def g_mu(mu: float) -> float:
        return math.exp(log_poly_kernel(divergence((mu, sigma0)), q))

    def g_sigma(sigma: float) -> float:
        if not sigma > 0.0:
            return 0.0
        ratio2 = (sigma / sigma0) ** 2
        a = 0.5 * (ratio2 - 2.0 + 1.0 / ratio2)
        b = (sigma * sigma + sigma0 * sigma0) / (2.0 * sigma * sigma * sigma0 * sigma0)
        width = math.sqrt((1.0 + a) / b)
        inner = integrate(
            lambda mu: math.exp(log_poly_kernel(divergence((mu, sigma)), q)),
            Interval.real_line(),
            1e-10,
            center=mu0,
            scale=width,
        )
        return inner.value / sigma

    return [(g_mu, Interval.real_line(), mu0), (g_sigma, Interval.positive(), sigma0)]


def _radial_slice(k: int, q: float) -> Slice:
    def g(r: float) -> float:
        return r ** (k - 1) * (1.0 + r * r) ** (-q) if r > 0.0 else 0.0

    return g, Interval.positive(), 1.0


def _slices(divergence: UnitaryDivergence, q: float) -> List[Slice]:
    family = divergence.family
    if isinstance(family, NormalLocScale) and family.known_sigma is None:
        return _normal_slices(divergence, q)
    if isinstance(family, LinearModel):
        # D̄ = βᵗAβ; after β = A^{-1/2} r u the kernel is radial
        return [_radial_slice(family.geometry.k_e, q)]
    if isinstance(family, GammaMean):
        return [_scalar_slice(divergence, q, 1.0)]
    return [_scalar_slice(divergence, q, None)]


def _probe(divergence: UnitaryDivergence, q: float, decades: int, rel_tol: float) -> Integrability:
    for g, domain, anchor in _slices(divergence, q):
        verdict = probe_integrability(g, domain, rel_tol, anchor=anchor, decades=decades)
        if verdict is Integrability.DIVERGENT:
            return verdict
    return Integrability.CONVERGENT


def _verify(divergence: UnitaryDivergence, analytic: float, decades: int, rel_tol: float) -> None:
    checks = [(analytic + 0.25, Integrability.CONVERGENT)]
    if analytic > 0.0:
        checks.append((max(analytic - 0.25, analytic / 2.0), Integrability.DIVERGENT))
    for q, expected in checks:
        verdict = _probe(divergence, q, decades, rel_tol)
        if verdict is not expected:
            raise ProbeError(
                f"tail index {analytic} of {divergence.family.label} ({divergence.kind.value}) "
                f"contradicts the integrability probe",
                diagnostic=f"q={q}: expected {expected.value}, probe says {verdict.value}",
            )


def q_lower(
    family: FamilyDescriptor,
    kind: Union[str, DivergenceKind],
    theta0: Param,
    *,
    verify: bool = True,
    decades: int = 8,
    rel_tol: float = 1e-6,
) -> float:
    """Tail index of the DB kernel for ``family`` and ``kind`` at ``theta0``.

    Args:
        family: Sampling family.
        kind: Divergence kind.
        theta0: Null value.
        verify: Check the tabulated value with the integrability probe.
        decades: Decades probed toward each end.
        rel_tol: Probe tolerance.

    Returns:
        q̲ ≥ 0.

    Raises:
        PriorNotAvailableError: If the DB prior of this kind does not exist.
        ProbeError: If the probe contradicts the tabulated value.
    """
    divergence = unitary(family, kind, theta0)
    analytic = float(family.tail_indices[divergence.kind.value])
    if not verify:
        return analytic

    key = (family.cache_key, divergence.kind.value, _theta_key(theta0), analytic)
    with _CACHE_LOCK:
        if key in _CACHE:
            logger.debug(f"tail index cache hit for {family.label} ({divergence.kind.value})")
            return _CACHE[key]

    _verify(divergence, analytic, decades, rel_tol)
    logger.debug(f"tail index {analytic} verified for {family.label} ({divergence.kind.value})")
    with _CACHE_LOCK:
        _CACHE[key] = analytic
    return analytic


def clear_tail_index_cache() -> None:
    with _CACHE_LOCK:
        _CACHE.clear()
