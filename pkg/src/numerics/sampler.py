"""
Seeded random-walk Metropolis sampler and batch-means error estimates.

The proposal is a spherical Gaussian random walk. Its scale is adapted during
burn-in toward a 20-50% acceptance band and frozen afterwards, so the retained
draws come from a time-homogeneous chain.
"""

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.config import SamplerConfig
from ..core.exceptions import NumericalError, SamplerError, ValidationError
from ..core.logger import get_logger

logger = get_logger(__name__)

LogTarget = Callable[[np.ndarray], float]

TUNE_INTERVAL = 100
ACCEPT_LOW = 0.20
ACCEPT_HIGH = 0.50


class ChainConfig(BaseModel):
    """Length, burn-in, initial proposal scale and seed of a chain."""

    model_config = ConfigDict(frozen=True)

    steps: int = Field(gt=0)
    burn_in: int = Field(ge=0)
    proposal_scale: float = Field(gt=0.0)
    seed: int = Field(ge=0, lt=2**64)

    @model_validator(mode="after")
    def _check_burn_in(self) -> "ChainConfig":
        if self.burn_in >= self.steps:
            raise ValueError("burn_in must be smaller than steps")
        return self

    @classmethod
    def from_settings(cls, settings: SamplerConfig) -> "ChainConfig":
        return cls(
            steps=settings.steps,
            burn_in=settings.burn_in,
            proposal_scale=settings.proposal_scale,
            seed=settings.seed,
        )


@dataclass(frozen=True)
class Chain:
    """Retained draws of a Metropolis run."""

    draws: np.ndarray
    acceptance_rate: float
    proposal_scale: float


def _evaluate(log_target: LogTarget, x: np.ndarray) -> float:
    value = float(log_target(x))
    if math.isnan(value):
        raise NumericalError("log_target returned NaN", point=x.tolist())
    return value


def rw_metropolis(
    log_target: LogTarget,
    init: Union[float, Sequence[float], np.ndarray],
    cfg: ChainConfig,
) -> Chain:
    """Run a random-walk Metropolis chain.

    Every step consumes one normal vector and one uniform from the generator,
    so identical seeds and configurations give bit-identical chains.

    Args:
        log_target: Unnormalized log density of the target.
        init: Starting point.
        cfg: Chain configuration.

    Returns:
        Chain holding ``steps - burn_in`` draws of shape ``(draws, dim)``.

    Raises:
        ValidationError: If the target is not finite at ``init``.
        NumericalError: If the target returns NaN.
    """
    current = np.atleast_1d(np.asarray(init, dtype=float)).copy()
    dim = current.size
    current_lp = _evaluate(log_target, current)
    if not math.isfinite(current_lp):
        raise ValidationError("log_target must be finite at init", field="init", value=current.tolist())

    rng = np.random.default_rng(cfg.seed)
    scale = cfg.proposal_scale
    retained = cfg.steps - cfg.burn_in
    draws = np.empty((retained, dim))
    accepted_window = 0
    accepted_kept = 0

    for step in range(cfg.steps):
        proposal = current + scale * rng.standard_normal(dim)
        log_u = math.log(rng.random() or np.finfo(float).tiny)
        proposal_lp = _evaluate(log_target, proposal)
        accepted = log_u < proposal_lp - current_lp
        if accepted:
            current, current_lp = proposal, proposal_lp

        if step < cfg.burn_in:
            accepted_window += int(accepted)
            if (step + 1) % TUNE_INTERVAL == 0:
                rate = accepted_window / TUNE_INTERVAL
                if rate < ACCEPT_LOW:
                    scale *= 0.7
                elif rate > ACCEPT_HIGH:
                    scale *= 1.4
                accepted_window = 0
        else:
            accepted_kept += int(accepted)
            draws[step - cfg.burn_in] = current

    acceptance = accepted_kept / retained
    if not ACCEPT_LOW / 2 <= acceptance <= min(1.0, 2 * ACCEPT_HIGH):
        logger.warning(f"Metropolis acceptance {acceptance:.3f} far from the tuning band")
    logger.debug(f"Metropolis: {retained} draws, acceptance {acceptance:.3f}, scale {scale:.4g}")
    return Chain(draws=draws, acceptance_rate=acceptance, proposal_scale=scale)


@dataclass(frozen=True)
class BatchMeans:
    """Mean, batch-means standard error and effective sample size."""

    mean: float
    std_error: float
    ess: float


def batch_means(values: np.ndarray, batches: int = 50) -> BatchMeans:
    """Batch-means Monte Carlo error of the mean of a correlated series.

    Args:
        values: One-dimensional series.
        batches: Number of contiguous batches.

    Returns:
        BatchMeans summary.

    Raises:
        SamplerError: If the series is shorter than two draws per batch.
    """
    values = np.asarray(values, dtype=float)
    size = values.size // batches
    if size < 2:
        raise SamplerError(f"need at least {2 * batches} draws for {batches} batches")
    trimmed = values[: size * batches]
    means = trimmed.reshape(batches, size).mean(axis=1)
    mean = float(trimmed.mean())
    std_error = float(means.std(ddof=1) / math.sqrt(batches))
    variance = float(trimmed.var(ddof=1))
    ess = variance / std_error**2 if std_error > 0 else float(trimmed.size)
    return BatchMeans(mean=mean, std_error=std_error, ess=ess)
