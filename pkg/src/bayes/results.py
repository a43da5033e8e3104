"""
Bayes factor results and the point-null model.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..models.families import FamilyDescriptor, Param


class BFMethod(str, Enum):
    """How a Bayes factor was evaluated."""

    QUADRATURE = "quadrature"
    MCMC = "mcmc"
    ASYMPTOTIC = "asymptotic"
    CLOSED_FORM = "closed_form"


class BFResult(BaseModel):
    """Bayes factor B12 = m1(y) / m2(y) in favor of the null model.

    ``err`` is a propagated quadrature bound or a Monte Carlo standard error.
    A zero ``bf12`` is only produced in closed form, when the sample is
    impossible under the null.
    """

    model_config = ConfigDict(frozen=True, use_enum_values=False)

    bf12: float = Field(ge=0.0)
    method: BFMethod
    err: float = Field(ge=0.0)
    family: str
    prior: str
    stats: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_value(self) -> "BFResult":
        if not math.isfinite(self.bf12):
            raise ValueError("bf12 must be finite")
        if self.bf12 == 0.0 and self.method is not BFMethod.CLOSED_FORM:
            raise ValueError("bf12 = 0 is only allowed for closed-form results")
        return self

    @property
    def bf21(self) -> float:
        return math.inf if self.bf12 == 0.0 else 1.0 / self.bf12

    @property
    def log_bf12(self) -> float:
        return math.log(self.bf12) if self.bf12 > 0.0 else -math.inf

    def to_json_dict(self) -> Dict[str, Any]:
        """Mapping with the field order used on the command line."""
        return {
            "bf12": self.bf12,
            "method": self.method.value,
            "err": self.err,
            "family": self.family,
            "prior": self.prior,
            "stats": self.stats,
        }


@dataclass(frozen=True)
class PointNull:
    """The simple model M1: θ = θ0, with π^N(ν) on the nuisance parameter if any."""

    family: FamilyDescriptor
    theta0: Param
    label: Optional[str] = "point_null"
