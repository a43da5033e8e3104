"""
Tests for Bayes factors, evidence limits and consistency scans.
"""

import math
import unittest

import numpy as np
import pytest
from scipy import integrate as sp_integrate
from scipy import stats as sp_stats

from src.alt_priors import intrinsic_density
from src.bayes import (
    BFMethod,
    BFResult,
    ConsistencyScan,
    LimitCurve,
    LimitKind,
    PointNull,
    ScanDirection,
    bayes_factor,
    bf_asymptotic,
    bf_mcmc_correction,
    consistency_scan,
    evidence_limit,
    evidence_limit_curve,
    jzs_bayes_factor,
    log_bayes_factor,
    log_marginal_likelihood,
    mle,
    normal_mixing_log_density,
    resolve_prior,
    resolve_s_convention,
)
from src.core.exceptions import PriorNotAvailableError, UnsupportedOperationError, ValidationError
from src.models import (
    BernoulliStats,
    ExponentialStats,
    NormalStats,
    ShiftedExponentialStats,
    gamma_mle_to_suffstats,
    get_family,
)


def assert_table_value(case: unittest.TestCase, value: float, target: float) -> None:
    """Published values are rounded to two decimals."""
    case.assertTrue(
        abs(value - target) <= max(0.02, 0.015 * abs(target)),
        f"{value:.4f} differs from {target}",
    )


class TestBFResult(unittest.TestCase):
    """Test cases for the result model"""

    def test_zero_needs_closed_form(self):
        """Test that only closed-form results may be zero"""
        with self.assertRaises(ValueError):
            BFResult(bf12=0.0, method=BFMethod.QUADRATURE, err=0.0, family="f", prior="p")
        result = BFResult(bf12=0.0, method=BFMethod.CLOSED_FORM, err=0.0, family="f", prior="p")
        self.assertEqual(result.bf21, math.inf)
        self.assertEqual(result.log_bf12, -math.inf)

    def test_json_order(self):
        """Test the key order of the JSON mapping"""
        result = BFResult(bf12=2.0, method=BFMethod.MCMC, err=0.1, family="bernoulli", prior="sum-db")
        payload = result.to_json_dict()
        self.assertEqual(list(payload), ["bf12", "method", "err", "family", "prior", "stats"])
        self.assertEqual(payload["method"], "mcmc")
        self.assertEqual(result.bf21, 0.5)

    def test_infinite_rejected(self):
        """Test that an infinite Bayes factor is rejected"""
        with self.assertRaises(ValueError):
            BFResult(bf12=math.inf, method=BFMethod.QUADRATURE, err=0.0, family="f", prior="p")


class TestQuadratureFactors(unittest.TestCase):
    """Test cases for Bayes factors by quadrature"""

    def test_bernoulli_balanced_sample(self):
        """Test the four priors on 5 successes in 10 trials"""
        family = get_family("bernoulli")
        stats = BernoulliStats(n=10, successes=5)
        for prior_id, target in (("sum-db", 3.26), ("min-db", 3.44), ("arithmetic", 4.06), ("fractional", 2.68)):
            with self.subTest(prior=prior_id):
                result = bayes_factor(family, resolve_prior(family, prior_id, 0.5), stats)
                self.assertIs(result.method, BFMethod.QUADRATURE)
                assert_table_value(self, result.bf12, target)

    def test_exponential_at_null_mean(self):
        """Test the four priors on a sample mean equal to mu0"""
        family = get_family("exponential")
        stats = ExponentialStats(n=10, ybar=5.0)
        for prior_id, target in (("sum-db", 5.65), ("min-db", 4.43), ("arithmetic", 5.13), ("fractional", 3.59)):
            with self.subTest(prior=prior_id):
                assert_table_value(self, bayes_factor(family, resolve_prior(family, prior_id, 5.0), stats).bf12, target)

    def test_normal_mean_against_direct_integral(self):
        """Test the Cauchy prior of a normal mean against scipy quadrature"""
        sigma, n, ybar = 2.0, 15, 0.9
        family = get_family("normal", known_sigma=sigma)
        stats = NormalStats(n=n, ybar=ybar, s=1.0)
        result = bayes_factor(family, resolve_prior(family, "sum-db", 0.0), stats)

        se = sigma / math.sqrt(n)
        m2, _ = sp_integrate.quad(
            lambda mu: sp_stats.norm.pdf(ybar, mu, se) * sp_stats.cauchy.pdf(mu, 0.0, sigma), -np.inf, np.inf
        )
        expected = sp_stats.norm.pdf(ybar, 0.0, se) / m2
        self.assertAlmostEqual(result.bf12 / expected, 1.0, delta=1e-6)

    def test_irregular_against_direct_integral(self):
        """Test the two-sided min-DB factor against scipy quadrature"""
        n, tmin = 5, 0.3
        family = get_family("irregular")
        result = bayes_factor(family, resolve_prior(family, "min-db", 0.0), ShiftedExponentialStats(n=n, tmin=tmin))

        prior = lambda t: 0.5 * (1.0 + 2.0 * abs(t)) ** -1.5  # noqa: E731
        m2 = sp_integrate.quad(lambda t: math.exp(n * t) * prior(t), -np.inf, 0.0)[0]
        m2 += sp_integrate.quad(lambda t: math.exp(n * t) * prior(t), 0.0, tmin)[0]
        self.assertAlmostEqual(result.bf12 / (1.0 / m2), 1.0, delta=1e-6)

    def test_irregular_impossible_under_null(self):
        """Test that T below theta0 gives an exact zero"""
        family = get_family("irregular")
        result = bayes_factor(family, resolve_prior(family, "min-db", 0.0), ShiftedExponentialStats(n=5, tmin=-0.5))
        self.assertEqual(result.bf12, 0.0)
        self.assertIs(result.method, BFMethod.CLOSED_FORM)

    def test_one_sided_needs_t_above_null(self):
        """Test that the one-sided test refuses T at or below theta0"""
        family = get_family("irregular", side="one-sided")
        prior = resolve_prior(family, "min-db", 0.0)
        with self.assertRaises(ValidationError):
            bayes_factor(family, prior, ShiftedExponentialStats(n=5, tmin=0.0))

    def test_log_scale(self):
        """Test that the log Bayes factor matches the float result"""
        family = get_family("bernoulli")
        prior = resolve_prior(family, "sum-db", 0.5)
        stats = BernoulliStats(n=20, successes=14)
        log_bf, rel_err = log_bayes_factor(family, prior, stats)
        self.assertAlmostEqual(log_bf, math.log(bayes_factor(family, prior, stats).bf12), places=12)
        self.assertLess(rel_err, 1e-5)

    def test_unknown_prior(self):
        """Test prior lookup failures"""
        family = get_family("bernoulli")
        with self.assertRaises(ValidationError):
            resolve_prior(family, "flat", 0.5)
        with self.assertRaises(PriorNotAvailableError):
            resolve_prior(get_family("normal"), "min-db", (0.0, 1.0))


class TestJZS(unittest.TestCase):
    """Test cases for the linear-model Bayes factor"""

    def setUp(self):
        rng = np.random.default_rng(11)
        self.x = rng.standard_normal(30)
        design = np.column_stack([np.ones(30), self.x])
        noise = rng.standard_normal(30)
        coef, *_ = np.linalg.lstsq(design, noise, rcond=None)
        # residual noise, orthogonal to the intercept and the slope
        self.noise = noise - design @ coef
        self.family = get_family("linear", X1=np.ones((30, 1)), Xe=self.x)

    def test_evidence_follows_signal(self):
        """Test that a stronger slope lowers B12"""
        weak = self.family.stats_from_sample(self.noise)
        strong = self.family.stats_from_sample(1.0 * self.x + self.noise)
        bf_weak = jzs_bayes_factor(self.family, weak).bf12
        bf_strong = jzs_bayes_factor(self.family, strong).bf12
        self.assertGreater(bf_weak, 1.0)
        self.assertLess(bf_strong, 1e-3)

    def test_too_few_observations(self):
        """Test that n must exceed the number of coefficients"""
        family = get_family("linear", X1=np.ones((2, 1)), Xe=np.array([0.0, 1.0]))
        with self.assertRaises(ValidationError):
            jzs_bayes_factor(family, family.stats_from_sample([1.0, 2.0]))


class TestMLE(unittest.TestCase):
    """Test cases for maximum likelihood estimates"""

    def test_regular_families(self):
        """Test closed-form estimates"""
        self.assertEqual(mle(get_family("bernoulli"), BernoulliStats(n=10, successes=3)), (0.3, None))
        self.assertEqual(mle(get_family("exponential"), ExponentialStats(n=4, ybar=2.5)), (2.5, None))

    def test_boundary_and_irregular(self):
        """Test boundary estimates and families without a regular MLE"""
        with self.assertRaises(ValidationError):
            mle(get_family("bernoulli"), BernoulliStats(n=10, successes=10))
        with self.assertRaises(UnsupportedOperationError):
            mle(get_family("irregular"), ShiftedExponentialStats(n=3, tmin=1.0))


class TestLimits(unittest.TestCase):
    """Test cases for evidence limits"""

    def test_curve_validation(self):
        """Test the limit curve invariants"""
        with self.assertRaises(ValueError):
            LimitCurve(n_values=(1, 2), values=(1.0,), which=LimitKind.B0_NULL_BOUNDARY)
        with self.assertRaises(ValueError):
            LimitCurve(n_values=(1,), values=(0.0,), which=LimitKind.B0_NULL_BOUNDARY)
        curve = LimitCurve(n_values=(1, 2), values=(1.0, 2.0), which="B0_null_boundary")
        with self.assertRaises(ValidationError):
            curve.linear_fit_r2()

    def test_linear_fit(self):
        """Test R^2 of an exactly linear curve"""
        curve = LimitCurve(n_values=(1, 2, 3, 4), values=(2.0, 4.0, 6.0, 8.0), which="B1_null_point")
        self.assertAlmostEqual(curve.linear_fit_r2(), 1.0, places=12)
        self.assertTrue(curve.is_nondecreasing())
        self.assertEqual(curve.to_records()[0], {"n": 1, "B1_null_point": 2.0})

    def test_exponential_boundary_grows(self):
        """Test that the null-boundary limit grows with n"""
        family = get_family("exponential")
        prior = resolve_prior(family, "sum-db", 5.0)
        curve = evidence_limit_curve(family, prior, (2, 8, 32))
        self.assertTrue(curve.is_nondecreasing())
        self.assertGreater(curve.values[0], 1.0)

    def test_undefined_limits(self):
        """Test pairs without an evidence limit"""
        family = get_family("irregular", side="one-sided")
        with self.assertRaises(UnsupportedOperationError):
            evidence_limit(family, resolve_prior(family, "min-db", 0.0), 10)
        bernoulli = get_family("bernoulli")
        with self.assertRaises(UnsupportedOperationError):
            evidence_limit(bernoulli, resolve_prior(bernoulli, "sum-db", 0.5), 10, LimitKind.B1_NULL_POINT)

    def test_mixing_densities_are_proper(self):
        """Test that each mixing density integrates to one"""
        for key in ("S", "A", "F"):
            with self.subTest(key=key):
                mass, _ = sp_integrate.dblquad(
                    lambda alpha, beta: math.exp(normal_mixing_log_density(key, alpha, beta)),
                    0.0,
                    np.inf,
                    -np.inf,
                    np.inf,
                )
                self.assertAlmostEqual(mass, 1.0, delta=1e-5)
        with self.assertRaises(ValidationError):
            normal_mixing_log_density("J", 0.0, 1.0)


class TestConsistencyScan(unittest.TestCase):
    """Test cases for evidence-consistency scans"""

    def test_exponential_far_from_null(self):
        """Test that B12 falls as the sample mean runs away from mu0"""
        family = get_family("exponential")
        prior = resolve_prior(family, "sum-db", 5.0)
        scan = consistency_scan(family, prior, 10, ScanDirection.YBAR_TO_INFINITY, steps=3)
        self.assertIsInstance(scan, ConsistencyScan)
        self.assertTrue(scan.is_decreasing())
        self.assertEqual(scan.points, (50.0, 500.0, 5000.0))

    def test_invalid_direction(self):
        """Test that a direction must fit the family"""
        family = get_family("exponential")
        prior = resolve_prior(family, "sum-db", 5.0)
        with self.assertRaises(ValidationError):
            consistency_scan(family, prior, 10, ScanDirection.T_TO_NULL)
        with self.assertRaises(ValidationError):
            consistency_scan(family, prior, 10, ScanDirection.YBAR_TO_ZERO, steps=1)


class TestInvariance(unittest.TestCase):
    """Test cases for reparameterization and sufficiency"""

    def test_exponential_mean_and_log_mean(self):
        """Test that B12 is the same whether mu or log mu is the parameter"""
        mean = get_family("exponential")
        log = get_family("exponential", parameterization="log")
        stats = ExponentialStats(n=10, ybar=7.5)
        for prior_id in ("sum-db", "min-db", "arithmetic", "fractional"):
            with self.subTest(prior=prior_id):
                by_mean = bayes_factor(mean, resolve_prior(mean, prior_id, 5.0), stats).bf12
                by_log = bayes_factor(log, resolve_prior(log, prior_id, math.log(5.0)), stats).bf12
                self.assertAlmostEqual(by_log / by_mean, 1.0, delta=1e-8)

    def test_sample_and_statistics(self):
        """Test that a raw sample and its sufficient statistics give the same B12"""
        exponential = get_family("exponential")
        sample = [2.1, 7.3, 4.4, 0.9, 11.0, 5.2]
        prior = resolve_prior(exponential, "sum-db", 5.0)
        from_sample = bayes_factor(exponential, prior, exponential.stats_from_sample(sample)).bf12
        from_stats = bayes_factor(exponential, prior, ExponentialStats(n=6, ybar=float(np.mean(sample)))).bf12
        self.assertEqual(from_sample, from_stats)

        bernoulli = get_family("bernoulli")
        prior = resolve_prior(bernoulli, "min-db", 0.5)
        flips = [1, 0, 1, 1, 0, 1, 1, 0, 1, 1]
        self.assertEqual(
            bayes_factor(bernoulli, prior, bernoulli.stats_from_sample(flips)).bf12,
            bayes_factor(bernoulli, prior, BernoulliStats(n=10, successes=7)).bf12,
        )


class TestNormalIntrinsic(unittest.TestCase):
    """Test cases for the normal location-scale family under intrinsic priors"""

    def test_against_direct_integral(self):
        """Test the closed-form mu-integral against scipy double quadrature"""
        family = get_family("normal")
        stats = NormalStats(n=10, ybar=1.0, s=2.0)
        theta0 = (0.0, 1.0)

        def likelihood(mu, sigma):
            return math.exp(family.loglik((mu, sigma), stats) - family.loglik((1.0, 2.0), stats))

        for prior_id in ("arithmetic", "fractional"):

            def integrand(mu, sigma):
                return likelihood(mu, sigma) * intrinsic_density(prior_id, family, theta0, (mu, sigma))

            with self.subTest(prior=prior_id):
                m2, _ = sp_integrate.dblquad(
                    integrand,
                    0.05,
                    40.0,
                    -30.0,
                    30.0,
                    epsabs=0.0,
                    epsrel=1e-8,
                )
                m1 = likelihood(0.0, 1.0)
                result = bayes_factor(family, resolve_prior(family, prior_id, theta0), stats)
                self.assertAlmostEqual(result.bf12 / (m1 / m2), 1.0, delta=1e-5)


class TestGammaFactors(unittest.TestCase):
    """Test cases for the gamma mean test with unknown shape"""

    def setUp(self):
        self.family = get_family("gamma")

    def test_null_cell(self):
        """Test B12^S at mu_hat = mu0 = 10, sigma_hat = 1"""
        stats = gamma_mle_to_suffstats(10.0, 1.0, 10)
        result = bayes_factor(self.family, resolve_prior(self.family, "sum-db", 10.0), stats)
        self.assertAlmostEqual(result.bf12 / 11.27, 1.0, delta=0.05)

    def test_concentrated_sample(self):
        """Test shapes beyond the trigamma range of the nuisance prior"""
        stats = gamma_mle_to_suffstats(10.0, 0.05, 10)
        null = log_marginal_likelihood(self.family, PointNull(self.family, 10.0), stats)
        self.assertTrue(math.isfinite(null.log_value))
        log_bf, _ = log_bayes_factor(self.family, resolve_prior(self.family, "min-db", 10.0), stats)
        self.assertTrue(math.isfinite(log_bf))
        self.assertGreater(log_bf, 0.0)


@pytest.mark.slow
class TestSimulationMethods(unittest.TestCase):
    """Test cases for the MCMC and asymptotic methods"""

    def test_mcmc_matches_quadrature(self):
        """Test the posterior-expectation identity on the Bernoulli family"""
        family = get_family("bernoulli")
        prior = resolve_prior(family, "sum-db", 0.5)
        stats = BernoulliStats(n=10, successes=5)
        exact = bayes_factor(family, prior, stats).bf12
        result = bf_mcmc_correction(family, prior, stats)
        self.assertIs(result.method, BFMethod.MCMC)
        self.assertAlmostEqual(result.bf12 / exact, 1.0, delta=0.05)

    def test_asymptotic_normal_mean(self):
        """Test that the Cauchy form is exact for a normal mean up to Monte Carlo error"""
        family = get_family("normal", known_sigma=1.0)
        stats = NormalStats(n=50, ybar=0.3, s=1.0)
        exact = bayes_factor(family, resolve_prior(family, "sum-db", 0.0), stats).bf12
        result = bf_asymptotic(family, 0.0, stats, form="cauchy", draws=50_000, seed=3)
        self.assertIs(result.method, BFMethod.ASYMPTOTIC)
        self.assertAlmostEqual(result.bf12 / exact, 1.0, delta=0.03)

    def test_s_convention(self):
        """Test that the resolver picks the closer convention"""
        verdict = resolve_s_convention()
        self.assertIn(verdict.convention, ("mle", "unbiased"))
        self.assertEqual(verdict.distances[verdict.convention], min(verdict.distances.values()))

    def test_cross_method_exponential(self):
        """Test quadrature, MCMC and the asymptotic form on n = 100 exponential data"""
        family = get_family("exponential")
        stats = ExponentialStats(n=100, ybar=5.6)
        for kind in ("sum", "min"):
            with self.subTest(kind=kind):
                prior = resolve_prior(family, f"{kind}-db", 5.0)
                exact = bayes_factor(family, prior, stats).bf12
                mcmc = bf_mcmc_correction(family, prior, stats)
                asymptotic = bf_asymptotic(family, 5.0, stats, kind=kind, prior=prior, draws=50_000, seed=5)
                self.assertLessEqual(abs(mcmc.bf12 - exact), 3.0 * mcmc.err + 0.01 * exact)
                self.assertAlmostEqual(asymptotic.bf12 / exact, 1.0, delta=0.10)

    def test_cross_method_gamma(self):
        """Test quadrature, MCMC and the asymptotic form on n = 100 gamma data"""
        family = get_family("gamma")
        stats = gamma_mle_to_suffstats(10.2, 1.0, 100)
        for kind in ("sum", "min"):
            with self.subTest(kind=kind):
                prior = resolve_prior(family, f"{kind}-db", 10.0)
                exact = bayes_factor(family, prior, stats).bf12
                mcmc = bf_mcmc_correction(family, prior, stats)
                asymptotic = bf_asymptotic(family, 10.0, stats, kind=kind, prior=prior, draws=20_000, seed=5)
                self.assertLessEqual(abs(mcmc.bf12 - exact), 3.0 * mcmc.err + 0.01 * exact)
                self.assertAlmostEqual(asymptotic.bf12 / exact, 1.0, delta=0.15)


if __name__ == "__main__":
    unittest.main()
