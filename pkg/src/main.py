"""
Main entry point for db-priors.
Reproduces the published tables and curves and computes ad-hoc Bayes factors.

Exit codes: 0 success, 2 usage or invalid input, 3 numerical failure or
unwritable output, 4 prior that does not exist for the family.

Dataset files (``--dataset``) are JSON mappings validated by the statistics
schema printed by ``db-priors stats-schema``; e.g.
``{"family": "bernoulli", "n": 10, "successes": 5}``. The linear model reads
``{"X1": [[...]], "Xe": [[...]], "y": [...]}`` instead.
"""

import functools
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import click
import numpy as np

from .bayes import bayes_factor, bf_asymptotic, bf_mcmc_correction, resolve_prior
from .core.config import DBPriorsConfig, load_config
from .core.exceptions import (
    ConfigError,
    DBPriorsError,
    NumericalFailure,
    PriorNotAvailableError,
    ReportError,
    ValidationError,
)
from .core.logger import console, setup_logger
from .db_prior import DBPrior
from .models.families import (
    FamilyDescriptor,
    FamilyId,
    Param,
    gamma_mle_to_suffstats,
    get_family,
    resolve_family_id,
)
from .models.stats import SuffStats, parse_stats, stats_json_schema
from .reporter import TableReport, TableReporter
from .tables import TargetOptions, default_grid, prior_curve, reproduce, simulate_table7, simulate_table8, target_names
from .tables.common import with_seed

logger = setup_logger()

EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_NOT_AVAILABLE = 4

PRIOR_CHOICES = (
    "sum-db",
    "min-db",
    "arithmetic",
    "fractional",
    "jeffreys-rule",
    "bp-cauchy",
    "mixture-cauchy",
    "jzs",
)


def exit_code(error: DBPriorsError) -> int:
    if isinstance(error, PriorNotAvailableError):
        return EXIT_NOT_AVAILABLE
    if isinstance(error, (NumericalFailure, ReportError)):
        return EXIT_NUMERICAL
    return EXIT_USAGE


def handle_errors(fn: Callable[..., Any]) -> Callable[..., Any]:
    """Map library errors onto the exit-code contract."""

    @functools.wraps(fn)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return fn(*args, **kwargs)
        except DBPriorsError as e:
            logger.error(f"{type(e).__name__}: {e}")
            sys.exit(exit_code(e))

    return wrapper


def _parse_sample(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[List[float]]:
    if value is None:
        return None
    try:
        return [float(v) for v in value.replace(" ", "").split(",") if v]
    except ValueError:
        raise click.BadParameter("expected comma-separated numbers") from None


def family_options(fn: Callable[..., Any]) -> Callable[..., Any]:
    """Flags naming a family, its parameters and the null value."""
    options = [
        click.option(
            "--family", "-f", required=True, help="Family id or alias (bernoulli, exponential, normal-locscale, ...)"
        ),
        click.option("--theta0", type=float, help="Null value of the tested parameter"),
        click.option("--mu0", type=float, help="Null mean (exponential, gamma, normal)"),
        click.option("--sigma0", type=float, help="Null standard deviation (normal location-scale)"),
        click.option("--p", "weight", type=float, help="Mixture weight of the fixed N(0, 1) component"),
        click.option("--divergence-mode", type=click.Choice(["laplace", "exact"]), help="Mixture divergence"),
        click.option("--side", type=click.Choice(["two-sided", "one-sided"]), help="Irregular family alternative"),
        click.option("--known-sigma", type=float, help="Normal location with this known sigma"),
        click.option("--parameterization", type=click.Choice(["mean", "log"]), help="Exponential parameterization"),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _family_params(
    family_id: FamilyId,
    weight: Optional[float],
    divergence_mode: Optional[str],
    side: Optional[str],
    known_sigma: Optional[float],
    parameterization: Optional[str],
) -> Dict[str, Any]:
    params: Dict[str, Any] = {}
    if family_id is FamilyId.NORMAL_MIXTURE:
        if weight is not None:
            params["p"] = weight
        if divergence_mode:
            params["divergence_mode"] = divergence_mode
    elif family_id is FamilyId.SHIFTED_EXPONENTIAL and side:
        params["side"] = side.replace("-", "_")
    elif family_id is FamilyId.NORMAL_LOCSCALE and known_sigma is not None:
        params["known_sigma"] = known_sigma
    elif family_id is FamilyId.EXPONENTIAL_SCALE and parameterization:
        params["parameterization"] = parameterization
    return params


def _load_dataset(path: Optional[str]) -> Optional[Dict[str, Any]]:
    if path is None:
        return None
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ValidationError("Dataset file is not readable JSON", field="dataset", value=path) from e
    if not isinstance(data, dict):
        raise ValidationError("Dataset must be a JSON object", field="dataset", value=path)
    return data


def build_family(opts: Dict[str, Any], dataset: Optional[Dict[str, Any]] = None) -> FamilyDescriptor:
    family_id = resolve_family_id(opts["family"])
    if family_id is FamilyId.LINEAR_MODEL:
        if dataset is None or "X1" not in dataset or "Xe" not in dataset:
            raise ValidationError("the linear model needs --dataset with X1, Xe and y", field="dataset")
        return get_family(family_id, X1=dataset["X1"], Xe=dataset["Xe"])
    params = _family_params(
        family_id,
        opts.get("weight"),
        opts.get("divergence_mode"),
        opts.get("side"),
        opts.get("known_sigma"),
        opts.get("parameterization"),
    )
    return get_family(family_id, **params)


def null_value(
    family: FamilyDescriptor, theta0: Optional[float], mu0: Optional[float], sigma0: Optional[float]
) -> Param:
    """θ0 of the family from ``--theta0`` / ``--mu0`` / ``--sigma0``.

    Raises:
        ValidationError: If a needed value is missing.
    """
    family_id = family.family_id
    mean = mu0 if mu0 is not None else theta0
    if family_id is FamilyId.LINEAR_MODEL:
        return 0.0
    if family_id is FamilyId.NORMAL_MIXTURE:
        return 0.0 if mean is None else mean
    if family_id is FamilyId.NORMAL_LOCSCALE and getattr(family, "known_sigma", None) is None:
        if mean is None or sigma0 is None:
            raise ValidationError("the normal location-scale test needs --mu0 and --sigma0", field="sigma0")
        return (mean, sigma0)
    if mean is None:
        raise ValidationError("missing null value; pass --theta0 or --mu0", field="theta0")
    return mean


def build_stats(family: FamilyDescriptor, flags: Dict[str, Any], dataset: Optional[Dict[str, Any]]) -> SuffStats:
    """Statistics from a sample, a dataset file or the per-family flags."""
    family_id = family.family_id
    if flags.get("sample") is not None:
        return family.stats_from_sample(flags["sample"])
    if family_id is FamilyId.LINEAR_MODEL:
        y = list((dataset or {}).get("y", []))
        return parse_stats({"family": family_id.value, "n": len(y), "y": y})
    if dataset is not None:
        return parse_stats(dataset)
    if family_id is FamilyId.GAMMA_MEAN and flags.get("mle_mean") is not None:
        if flags.get("mle_sd") is None or flags.get("n") is None:
            raise ValidationError("--mle-mean needs --mle-sd and --n", field="mle_sd")
        return gamma_mle_to_suffstats(flags["mle_mean"], flags["mle_sd"], flags["n"])

    fields = {
        FamilyId.BERNOULLI: ("successes",),
        FamilyId.EXPONENTIAL_SCALE: ("ybar",),
        FamilyId.NORMAL_LOCSCALE: ("ybar", "s", "s_convention"),
        FamilyId.SHIFTED_EXPONENTIAL: ("tmin", "ybar"),
        FamilyId.GAMMA_MEAN: ("ybar", "logmean"),
        FamilyId.NORMAL_MIXTURE: (),
    }[family_id]
    data: Dict[str, Any] = {"family": family_id.value, "n": flags.get("n")}
    data.update({name: flags[name] for name in fields if flags.get(name) is not None})
    if data["n"] is None:
        raise ValidationError("missing --n", field="n")
    return parse_stats(data)


def _emit(text: str) -> None:
    click.echo(text, nl=False)


def _emit_report(reporter: TableReporter, report: TableReport, out: Optional[str], fmt: str, show: bool) -> None:
    if show:
        reporter.print_report(report)
    if fmt == "json":
        text = reporter.write_json(reporter.payload(report), out)
    else:
        text = reporter.write_csv(report.frame, out)
    if out:
        logger.info(f"{report.target} written to {out}")
    else:
        _emit(text)


@click.group()
@click.option("--config", "-c", type=click.Path(), help="Path to config file")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    help="Log level",
)
@click.pass_context
def cli(ctx: click.Context, config: Optional[str], log_level: Optional[str]) -> None:
    """db-priors - divergence-based priors and Bayes factors"""
    ctx.ensure_object(dict)
    try:
        settings = load_config(config)
    except ConfigError as e:
        logger.error(f"Failed to load config: {e}")
        sys.exit(EXIT_USAGE)
    if log_level:
        settings = settings.model_copy(update={"log_level": log_level.upper()})
    setup_logger(settings.log_level, settings.log_file)
    ctx.obj["config"] = settings


def _config(ctx: click.Context) -> DBPriorsConfig:
    return ctx.obj["config"]


@cli.command("reproduce")
@click.argument("target", type=click.Choice(target_names()))
@click.option("--out", "-o", type=click.Path(), help="Write to this file instead of stdout")
@click.option("--seed", type=int, help="Seed of the Monte Carlo parts")
@click.option("--n-max", type=int, help="Largest n of the limit curves")
@click.option("--mcmc/--no-mcmc", default=False, help="Add the MCMC Bayes factors (table6)")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--show/--no-show", default=False, help="Also print the table on stderr")
@click.pass_context
@handle_errors
def reproduce_cmd(
    ctx: click.Context,
    target: str,
    out: Optional[str],
    seed: Optional[int],
    n_max: Optional[int],
    mcmc: bool,
    fmt: str,
    show: bool,
) -> None:
    """Compute a published table or curve"""
    config = _config(ctx)
    try:
        options = TargetOptions(n_max=n_max, mcmc=mcmc, seed=seed)
    except ValueError as e:
        raise ValidationError(f"invalid option: {e}", field="options") from e
    report = reproduce(target, options, config)
    _emit_report(TableReporter(config.output), report, out, fmt, show)


@cli.command("bf")
@family_options
@click.option("--prior", required=True, type=click.Choice(PRIOR_CHOICES), help="Prior of the alternative")
@click.option("--n", type=int, help="Sample size")
@click.option("--successes", type=float, help="Bernoulli successes")
@click.option("--ybar", type=float, help="Sample mean")
@click.option("--s", type=float, help="Sample standard deviation")
@click.option("--s-convention", type=click.Choice(["mle", "unbiased"]), help="Divisor of --s")
@click.option("--tmin", type=float, help="Sample minimum (irregular family)")
@click.option("--logmean", type=float, help="Mean of log y (gamma family)")
@click.option("--mle-mean", type=float, help="Gamma MLE of the mean")
@click.option("--mle-sd", type=float, help="Gamma MLE of the standard deviation")
@click.option("--sample", callback=_parse_sample, help="Comma-separated raw observations")
@click.option("--dataset", type=click.Path(), help="JSON statistics or linear-model data")
@click.option(
    "--method", type=click.Choice(["quadrature", "mcmc", "asymptotic"]), default="quadrature", show_default=True
)
@click.option("--seed", type=int, help="Seed of the mcmc and asymptotic methods")
@click.option("--rel-tol", type=float, help="Relative quadrature tolerance")
@click.option("--out", "-o", type=click.Path(), help="Write the JSON result to this file")
@click.pass_context
@handle_errors
def bf_cmd(ctx: click.Context, **flags: Any) -> None:
    """Bayes factor B12 in favour of the point null"""
    config = with_seed(_config(ctx), flags["seed"])
    if flags["rel_tol"] is not None:
        if not flags["rel_tol"] > 0.0:
            raise ValidationError("--rel-tol must be positive", field="rel_tol", value=flags["rel_tol"])
        numerics = config.numerics.model_copy(update={"rel_tol": flags["rel_tol"]})
        config = config.model_copy(update={"numerics": numerics})

    dataset = _load_dataset(flags["dataset"])
    family = build_family(flags, dataset)
    theta0 = null_value(family, flags["theta0"], flags["mu0"], flags["sigma0"])
    stats = build_stats(family, flags, dataset)
    prior = resolve_prior(family, flags["prior"], theta0, config=config)

    method = flags["method"]
    if method != "quadrature" and not isinstance(prior, DBPrior):
        raise ValidationError(f"--method {method} needs a DB prior", field="method", value=flags["prior"])
    if method == "mcmc":
        result = bf_mcmc_correction(family, prior, stats, config=config)  # type: ignore[arg-type]
    elif method == "asymptotic":
        result = bf_asymptotic(
            family, theta0, stats, kind=prior.kind.value, prior=prior, config=config  # type: ignore[union-attr]
        )
    else:
        result = bayes_factor(family, prior, stats, config=config)

    text = TableReporter(config.output).write_json(result.to_json_dict(), flags["out"])
    if not flags["out"]:
        _emit(text)


@cli.command("prior-curve")
@family_options
@click.option("--prior", required=True, type=click.Choice(PRIOR_CHOICES), help="Prior to evaluate")
@click.option("--nu", type=float, help="Nuisance value (sigma of the normal family, shape of the gamma family)")
@click.option("--theta-min", type=float, help="Lower end of the grid")
@click.option("--theta-max", type=float, help="Upper end of the grid")
@click.option("--points", type=click.IntRange(min=2), default=101, show_default=True)
@click.option("--out", "-o", type=click.Path(), help="Write the CSV to this file")
@click.pass_context
@handle_errors
def prior_curve_cmd(ctx: click.Context, **flags: Any) -> None:
    """Density of a prior on a grid of the tested parameter"""
    config = _config(ctx)
    family = build_family(flags)
    theta0 = null_value(family, flags["theta0"], flags["mu0"], flags["sigma0"])
    prior = resolve_prior(family, flags["prior"], theta0, config=config)

    bounds = (flags["theta_min"], flags["theta_max"])
    grid: Optional[Sequence[float]] = None
    if any(b is not None for b in bounds):
        if None in bounds or not bounds[0] < bounds[1]:
            raise ValidationError("--theta-min and --theta-max must be given together, in order", field="theta_min")
        grid = np.linspace(bounds[0], bounds[1], flags["points"])
    else:
        grid = default_grid(family, theta0, flags["nu"], flags["points"])

    frame = prior_curve(family, prior, grid, nu=flags["nu"])
    text = TableReporter(config.output).write_csv(frame, flags["out"])
    if not flags["out"]:
        _emit(text)


def _simulation_command(name: str, fn: Callable[..., TableReport], default_draws: int) -> None:
    @cli.command(name, help=f"{(fn.__doc__ or name).splitlines()[0]} (qualitative)")
    @click.option("--draws", type=click.IntRange(min=1), default=default_draws, show_default=True)
    @click.option("--seed", type=int, help="Seed of the simulated samples")
    @click.option("--out", "-o", type=click.Path(), help="Write to this file instead of stdout")
    @click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
    @click.option("--show/--no-show", default=False, help="Also print the table on stderr")
    @click.pass_context
    @handle_errors
    def command(ctx: click.Context, draws: int, seed: Optional[int], out: Optional[str], fmt: str, show: bool) -> None:
        config = _config(ctx)
        report = fn(draws=draws, seed=seed, config=config)
        _emit_report(TableReporter(config.output), report, out, fmt, show)


_simulation_command("simulate-table7", simulate_table7, 20)
_simulation_command("simulate-table8", simulate_table8, 5)


@cli.command("stats-schema")
@click.option("--out", "-o", type=click.Path(), help="Write the schema to this file")
@click.pass_context
@handle_errors
def stats_schema_cmd(ctx: click.Context, out: Optional[str]) -> None:
    """JSON schema of the --dataset statistics files"""
    text = TableReporter(_config(ctx).output).write_json(stats_json_schema(), out)
    if out:
        console.print(f"Schema saved to {Path(out)}")
    else:
        _emit(text)


def main() -> None:
    """Main entry point"""
    cli(obj={})


if __name__ == "__main__":
    main()
