"""
Prior density curves on a grid.
"""

import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from ..alt_priors import ComparisonPrior
from ..bayes.factors import Prior
from ..core.config import DBPriorsConfig, get_default_config
from ..core.exceptions import UnsupportedOperationError, ValidationError
from ..core.logger import TableLogger
from ..db_prior import normal_sum_conditional_mu, normal_sum_marginal_sigma
from ..models.families import (
    ExponentialScale,
    FamilyDescriptor,
    GammaMean,
    LinearModel,
    NormalLocScale,
    NormalMixture,
    Param,
    ShiftedExponential,
    get_family,
)
from ..reporter import TableReport
from .common import COLUMN_LABELS, PriorCache
from .registry import TargetName, TargetOptions, register_target

DEFAULT_POINTS = 101


def default_grid(
    family: FamilyDescriptor, theta0: Param, nu: Optional[float] = None, points: int = DEFAULT_POINTS
) -> np.ndarray:
    """Grid of the tested parameter wide enough to show the tails."""
    if isinstance(family, (ExponentialScale, GammaMean)):
        if isinstance(family, ExponentialScale) and family.parameterization == "log":
            return np.linspace(float(theta0) - 5.0, float(theta0) + 5.0, points)
        return np.geomspace(float(theta0) / 100.0, float(theta0) * 100.0, points)
    if isinstance(family, NormalLocScale):
        if family.known_sigma is None:
            mu0, sigma0 = (float(v) for v in theta0)  # type: ignore[union-attr]
        else:
            mu0, sigma0 = float(theta0), family.known_sigma
        return np.linspace(mu0 - 10.0 * sigma0, mu0 + 10.0 * sigma0, points)
    if isinstance(family, ShiftedExponential):
        t0 = float(theta0)
        if family.side == "one_sided":
            # open at θ0, where the intrinsic prior has a log singularity
            return np.linspace(t0, t0 + 5.0, points + 1)[1:]
        return np.linspace(t0 - 5.0, t0 + 5.0, points)
    if isinstance(family, NormalMixture):
        return np.linspace(-6.0, 6.0, points)
    if isinstance(family, LinearModel):
        raise UnsupportedOperationError("curves need a scalar tested parameter", family=family.label)
    return np.linspace(0.005, 0.995, points)


def _density(prior: Prior, family: FamilyDescriptor, x: float, nu: Optional[float]) -> float:
    if isinstance(family, NormalLocScale) and family.known_sigma is None:
        value = prior.log_density((x, float(nu)), None, exact=True)  # type: ignore[arg-type]
    else:
        value = prior.log_density(x, nu, exact=True)
    return math.exp(value) if value > -math.inf else 0.0


def prior_curve(
    family: FamilyDescriptor,
    prior: Prior,
    grid: Optional[Sequence[float]] = None,
    *,
    nu: Optional[float] = None,
    points: int = DEFAULT_POINTS,
) -> pd.DataFrame:
    """Density of ``prior`` on a grid of the tested parameter.

    For the normal location-scale family ``nu`` is the σ at which the joint
    density is sliced; for the gamma family it is the shape α.

    Returns:
        Frame with columns ``theta`` and ``density``; improper comparison
        priors add a constant ``total_mass`` column.

    Raises:
        ValidationError: If a needed ``nu`` is missing.
    """
    slices_sigma = isinstance(family, NormalLocScale) and family.known_sigma is None
    if (family.has_nuisance or slices_sigma) and nu is None:
        raise ValidationError(f"curves of {family.label} need a value for nu", field="nu")
    xs = np.asarray(grid, dtype=float) if grid is not None else default_grid(family, prior.theta0, nu, points)
    frame = pd.DataFrame({"theta": xs, "density": [_density(prior, family, float(x), nu) for x in xs]})
    if nu is not None:
        frame.insert(1, "sigma" if slices_sigma else "nu", nu)
    if isinstance(prior, ComparisonPrior) and not prior.is_proper:
        frame["total_mass"] = prior.total_mass
    return frame


def _section(frame: pd.DataFrame, figure: str, prior: str, given: str) -> pd.DataFrame:
    return pd.DataFrame(
        {"figure": figure, "prior": prior, "given": given, "x": frame["theta"], "density": frame["density"]}
    )


@register_target(TargetName.PRIOR_FIGURES)
def prior_figures(options: TargetOptions, config: DBPriorsConfig, table_logger: TableLogger) -> TableReport:
    """Density curves of the DB and comparison priors in long format."""
    cache = PriorCache(config)
    sections: List[pd.DataFrame] = []

    def add(
        figure: str, family: FamilyDescriptor, prior_ids: Sequence[str], theta0: Any, given: str = "", **kwargs: Any
    ) -> None:
        for prior_id in prior_ids:
            frame = prior_curve(family, cache.get(family, prior_id, theta0), **kwargs)
            label = "SL" if isinstance(family, NormalMixture) and prior_id == "sum-db" else COLUMN_LABELS[prior_id]
            sections.append(_section(frame, figure, label, given))

    table_logger.start_target(0)
    add("bernoulli", get_family("bernoulli"), ("sum-db", "min-db", "arithmetic", "fractional"), 0.5)
    add("exponential", get_family("exponential_scale"), ("sum-db", "min-db", "arithmetic", "fractional"), 1.0)

    sigmas = np.geomspace(0.01, 100.0, DEFAULT_POINTS)
    sections.append(
        pd.DataFrame(
            {
                "figure": "normal_sigma",
                "prior": "S",
                "given": "",
                "x": sigmas,
                "density": [normal_sum_marginal_sigma(float(s), 1.0) for s in sigmas],
            }
        )
    )
    mus = np.linspace(-10.0, 10.0, DEFAULT_POINTS)
    for sigma in (1.0, 3.0):
        sections.append(
            pd.DataFrame(
                {
                    "figure": "normal_mu_given_sigma",
                    "prior": "S",
                    "given": f"sigma={sigma:g}",
                    "x": mus,
                    "density": [normal_sum_conditional_mu(float(m), sigma, 0.0, 1.0) for m in mus],
                }
            )
        )

    add("irregular_two_sided", get_family("shifted_exponential", side="two_sided"), ("min-db",), 0.0)
    add("irregular_one_sided", get_family("shifted_exponential", side="one_sided"), ("min-db", "arithmetic"), 0.0)

    for p in (0.25, 0.5, 0.75):
        mixture = get_family("normal_mixture", p=p, divergence_mode="laplace")
        add("mixture", mixture, ("sum-db", "mixture-cauchy"), 0.0, given=f"p={p:g}")
    add("mixture", get_family("normal_mixture", p=0.5), ("bp-cauchy",), 0.0)

    gamma = get_family("gamma_mean")
    for alpha in (1.0, 10.0):
        add("gamma", gamma, ("sum-db", "min-db"), 1.0, given=f"alpha={alpha:g}", nu=alpha)

    frame = pd.concat(sections, ignore_index=True)
    return TableReport(target=TargetName.PRIOR_FIGURES.value, frame=frame)
