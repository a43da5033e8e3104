"""
Sufficient statistics per sampling family.

Every statistics model is a frozen pydantic model carrying a ``family`` tag, so
datasets and scenarios can be loaded from JSON through :func:`parse_stats`.
"""

import math
from typing import Annotated, Any, Dict, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, TypeAdapter, model_validator
from pydantic import ValidationError as PydanticValidationError

from ..core.exceptions import ValidationError


class SuffStats(BaseModel):
    """Sample size shared by all statistics models."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    n: PositiveInt

    def summary(self) -> Dict[str, Any]:
        """Plain mapping used in JSON results (drops bulky raw samples)."""
        data = self.model_dump(exclude={"sample", "y"})
        if hasattr(self, "sample") or hasattr(self, "y"):
            data["raw"] = "omitted"
        return data


class BernoulliStats(SuffStats):
    """Number of successes ``T``; fractional values arise from ``T = n * theta_hat``."""

    family: Literal["bernoulli"] = "bernoulli"
    successes: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _check_range(self) -> "BernoulliStats":
        if self.successes > self.n:
            raise ValueError("successes must not exceed n")
        return self


class ExponentialStats(SuffStats):
    family: Literal["exponential_scale"] = "exponential_scale"
    ybar: PositiveFloat


class NormalStats(SuffStats):
    """Sample mean and standard deviation.

    ``s_convention`` states whether ``s**2`` divides the sum of squares by ``n``
    (``mle``) or by ``n - 1`` (``unbiased``).
    """

    family: Literal["normal_locscale"] = "normal_locscale"
    ybar: float
    s: PositiveFloat
    s_convention: Literal["mle", "unbiased"] = "mle"

    @model_validator(mode="after")
    def _check_convention(self) -> "NormalStats":
        if self.s_convention == "unbiased" and self.n < 2:
            raise ValueError("the unbiased convention needs n >= 2")
        return self

    @property
    def sum_squares(self) -> float:
        divisor = self.n if self.s_convention == "mle" else self.n - 1
        return divisor * self.s * self.s


class ShiftedExponentialStats(SuffStats):
    """Sample minimum ``T`` and, optionally, the sample mean."""

    family: Literal["shifted_exponential"] = "shifted_exponential"
    tmin: float
    ybar: Optional[float] = None

    @model_validator(mode="after")
    def _check_mean(self) -> "ShiftedExponentialStats":
        if self.ybar is not None and self.ybar < self.tmin:
            raise ValueError("ybar must not be below the sample minimum")
        return self

    @property
    def mean(self) -> float:
        return self.tmin if self.ybar is None else self.ybar


class GammaStats(SuffStats):
    """Sample mean and mean log-observation."""

    family: Literal["gamma_mean"] = "gamma_mean"
    ybar: PositiveFloat
    logmean: float

    @model_validator(mode="after")
    def _check_jensen(self) -> "GammaStats":
        if self.logmean > math.log(self.ybar) + 1e-12:
            raise ValueError("logmean must not exceed log(ybar)")
        return self


class MixtureStats(SuffStats):
    """Raw sample; the mixture family has no finite sufficient reduction."""

    family: Literal["normal_mixture"] = "normal_mixture"
    sample: Tuple[float, ...]

    @model_validator(mode="after")
    def _check_length(self) -> "MixtureStats":
        if len(self.sample) != self.n:
            raise ValueError("sample length must equal n")
        return self

    @classmethod
    def of(cls, sample: Any) -> "MixtureStats":
        values = tuple(float(v) for v in sample)
        return cls(n=len(values), sample=values)


class LinearModelStats(SuffStats):
    """Response vector of a linear model."""

    family: Literal["linear_model"] = "linear_model"
    y: Tuple[float, ...]

    @model_validator(mode="after")
    def _check_length(self) -> "LinearModelStats":
        if len(self.y) != self.n:
            raise ValueError("y length must equal n")
        return self


AnyStats = Annotated[
    Union[
        BernoulliStats,
        ExponentialStats,
        NormalStats,
        ShiftedExponentialStats,
        GammaStats,
        MixtureStats,
        LinearModelStats,
    ],
    Field(discriminator="family"),
]

_STATS_ADAPTER: TypeAdapter = TypeAdapter(AnyStats)


def parse_stats(data: Dict[str, Any]) -> SuffStats:
    """Validate a JSON mapping into the statistics model named by ``family``.

    Raises:
        ValidationError: If the mapping does not match any statistics schema.
    """
    try:
        return _STATS_ADAPTER.validate_python(data)
    except PydanticValidationError as e:
        raise ValidationError("Invalid sufficient statistics", field="stats", value=data.get("family")) from e


def stats_json_schema() -> Dict[str, Any]:
    return _STATS_ADAPTER.json_schema()
