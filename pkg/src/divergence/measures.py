"""
Symmetrized Kullback-Leibler divergences and their unitary versions.

``D^S`` adds both directed divergences, ``D^M`` takes twice the true minimum of
the two. The unitary divergence D̄ divides by the effective sample size n★, so
that it does not grow with n for iid data.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from ..core.exceptions import PriorNotAvailableError, UnsupportedOperationError, ValidationError
from ..models.families import FamilyDescriptor, FamilyId, Param
from .mixture import mixture_divergence


class DivergenceKind(str, Enum):
    """Symmetrization of the directed divergence."""

    SUM = "sum"
    MIN = "min"

    @classmethod
    def parse(cls, name: Union[str, "DivergenceKind"]) -> "DivergenceKind":
        """Accept ``sum``, ``min``, ``sum-db`` and ``min-db``."""
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        if key.endswith("-db") or key.endswith("_db"):
            key = key[:-3]
        try:
            return cls(key)
        except ValueError:
            raise ValidationError("divergence kind must be 'sum' or 'min'", field="kind", value=name)


def _require_kind(family: FamilyDescriptor, kind: DivergenceKind) -> None:
    if kind.value in family.missing_kinds:
        raise PriorNotAvailableError(family.missing_kinds[kind.value], family=family.label, prior=f"{kind.value}-db")


def _mixture_other(a: Param, b: Param) -> float:
    a, b = float(a), float(b)
    if a != 0.0 and b != 0.0:
        raise UnsupportedOperationError(
            "mixture divergences are defined against the null mu = 0", family="normal_mixture"
        )
    return a if b == 0.0 else b


def d_sum(family: FamilyDescriptor, a: Param, b: Param, nu: Optional[float] = None) -> float:
    """Sum-symmetrized divergence ``KL[a:b] + KL[b:a]`` per observation.

    For the linear model the value is the full-sample divergence.

    Raises:
        UnsupportedOperationError: If the family's directed divergences are
            infinite in one direction; use :func:`d_min` instead.
    """
    if "sum" in family.missing_kinds:
        raise UnsupportedOperationError(
            "D^S is infinite for this family (one directed divergence is infinite); use d_min",
            family=family.label,
        )
    if family.family_id is FamilyId.NORMAL_MIXTURE:
        other = _mixture_other(a, b)
        return (1.0 - family.p) * mixture_divergence(family.p, other, family.divergence_mode)
    return family.kl_unit(a, b, nu) + family.kl_unit(b, a, nu)


def d_min(family: FamilyDescriptor, a: Param, b: Param, nu: Optional[float] = None) -> float:
    """Twice the minimum of the two directed divergences; an infinite direction is ignored.

    Raises:
        UnsupportedOperationError: If both directions are infinite or the family
            has no per-observation directed divergence.
    """
    if family.family_id is FamilyId.NORMAL_MIXTURE:
        raise UnsupportedOperationError("the mixture has no min divergence", family=family.label)
    forward = family.kl_unit(a, b, nu)
    backward = family.kl_unit(b, a, nu)
    if math.isinf(forward) and math.isinf(backward):
        raise UnsupportedOperationError("both directed divergences are infinite", family=family.label)
    return 2.0 * min(forward, backward)


@dataclass(frozen=True)
class UnitaryDivergence:
    """θ ↦ D̄[θ, θ0] = D/n★ for a fixed family, kind and null value.

    ``nu`` fixes the nuisance parameter; it may also be passed per call.
    """

    family: FamilyDescriptor
    kind: DivergenceKind
    theta0: Param
    nu: Optional[float] = None

    def __call__(self, theta: Param, nu: Optional[float] = None) -> float:
        nu = self.nu if nu is None else nu
        if self.family.family_id is FamilyId.NORMAL_MIXTURE:
            return mixture_divergence(self.family.p, float(theta) - float(self.theta0), self.family.divergence_mode)
        if self.kind is DivergenceKind.SUM:
            d = d_sum(self.family, theta, self.theta0, nu)
        else:
            d = d_min(self.family, theta, self.theta0, nu)
        return d * self.family.unitary_scale()

    def at_log_ratio(self, x: float, nu: Optional[float] = None) -> float:
        """D̄ at log θ - log θ0 = ``x`` for a log-scale family.

        Agrees with the call on θ wherever θ is a float, and stays exact far
        beyond, where θ itself would overflow or underflow.

        Raises:
            UnsupportedOperationError: If the family is not log-scale.
        """
        if not self.family.log_scale:
            raise UnsupportedOperationError("log-ratio divergence needs a log-scale family", family=self.family.label)
        nu = self.nu if nu is None else nu
        forward = self.family.kl_log_ratio(x, nu)
        backward = self.family.kl_log_ratio(-x, nu)
        if self.kind is DivergenceKind.SUM:
            value = forward + backward
        else:
            value = 2.0 * min(forward, backward)
        return value * self.family.unitary_scale()


def unitary(
    family: FamilyDescriptor,
    kind: Union[str, DivergenceKind],
    theta0: Param,
    nu: Optional[float] = None,
) -> UnitaryDivergence:
    """Build the unitary divergence to ``theta0``.

    Raises:
        PriorNotAvailableError: If the kind is not defined for the family.
        ValidationError: If ``theta0`` is outside the parameter space.
    """
    kind = DivergenceKind.parse(kind)
    _require_kind(family, kind)
    family.validate_theta(theta0, theta0)
    if family.family_id is FamilyId.NORMAL_MIXTURE and float(theta0) != 0.0:
        raise ValidationError("the mixture null is mu = 0", field="theta0", value=theta0)
    return UnitaryDivergence(family=family, kind=kind, theta0=theta0, nu=nu)
