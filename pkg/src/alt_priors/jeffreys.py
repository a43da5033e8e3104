"""Jeffreys' general-rule testing prior (1/π) |d/dθ arctan √(D^S[θ, θ0]/n)|."""

import math

from ..core.exceptions import UnsupportedOperationError
from ..divergence import DivergenceKind, UnitaryDivergence, unitary
from ..models.families import FamilyDescriptor, FamilyId, NormalLocScale

RELATIVE_STEP = 1e-6

_SCALAR_REGULAR = (FamilyId.BERNOULLI, FamilyId.EXPONENTIAL_SCALE, FamilyId.NORMAL_LOCSCALE)


def _check_family(family: FamilyDescriptor) -> None:
    if family.family_id is FamilyId.SHIFTED_EXPONENTIAL:
        raise UnsupportedOperationError(
            "the rule needs D^S, which is infinite for the irregular family", family=family.label
        )
    scalar = family.family_id in _SCALAR_REGULAR and not (
        isinstance(family, NormalLocScale) and family.known_sigma is None
    )
    if not scalar:
        raise UnsupportedOperationError(
            "the rule applies to a scalar parameter of a regular iid family", family=family.label
        )


def _angle(divergence: UnitaryDivergence, theta: float) -> float:
    return math.atan(math.sqrt(divergence(theta)))


def jeffreys_rule_log_density_fn(family: FamilyDescriptor, theta0: float):
    """θ ↦ log π^J(θ) for a fixed null."""
    _check_family(family)
    divergence = unitary(family, DivergenceKind.SUM, theta0)
    support = family.support(theta0)

    def log_density(theta: float, nu=None) -> float:
        t = float(theta)
        if not support.contains(t):
            return -math.inf
        h = RELATIVE_STEP * max(abs(t), 1e-3)
        room = min(t - support.lower, support.upper - t)
        h = min(h, 0.5 * room)
        center = _angle(divergence, t)
        # one-sided slopes, so the kink of √D^S at θ0 is handled
        forward = abs(_angle(divergence, t + h) - center)
        backward = abs(center - _angle(divergence, t - h))
        value = (forward + backward) / (2.0 * h * math.pi)
        return math.log(value) if value > 0.0 else -math.inf

    return log_density


def jeffreys_rule_density(family: FamilyDescriptor, theta0: float, theta: float) -> float:
    """π^J(θ) by central differences with a relative step of 1e-6.

    Raises:
        UnsupportedOperationError: For vector parameters, nuisance families
            and the irregular family.
    """
    return math.exp(jeffreys_rule_log_density_fn(family, theta0)(theta))
