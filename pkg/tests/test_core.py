"""Conversions, densities, sufficient statistics, moments and the implicit cumulant."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import digamma

from expfam_div import Unsupported, make_family
from expfam_div.verify import omega_set, random_source

LOG_2PI = math.log(2.0 * math.pi)


class TestConversions:
    def test_poisson_to_natural(self):
        fam = make_family("poisson")
        assert fam.to_natural(fam.source(2.0))[0] == pytest.approx(math.log(2.0), rel=1e-15)

    def test_exponential_identity_map(self):
        fam = make_family("exponential")
        assert fam.to_natural(fam.source(1.0))[0] == 1.0

    def test_gaussian1d_to_natural(self):
        fam = make_family("gaussian1d")
        theta = fam.to_natural(fam.source(1.0, 2.0))
        assert theta[0] == pytest.approx(0.5)
        assert theta[1] == pytest.approx(-0.25)

    def test_poisson_to_source(self):
        fam = make_family("poisson")
        assert fam.to_source(fam.natural(0.0))[0] == pytest.approx(1.0)

    def test_bernoulli_logistic(self):
        fam = make_family("bernoulli")
        assert fam.to_source(fam.natural(math.log(4.0)))[0] == pytest.approx(0.8, rel=1e-14)

    def test_gaussian1d_round_trip_example(self):
        fam = make_family("gaussian1d")
        lam = fam.to_source(fam.natural(0.5, -0.25))
        assert lam[0] == pytest.approx(1.0)
        assert lam[1] == pytest.approx(2.0)

    @given(st.floats(min_value=0.01, max_value=100.0))
    @settings(deadline=None, max_examples=50)
    def test_scalar_round_trips(self, lam_value):
        for fid in ("exponential", "poisson", "laplace", "rayleigh", "weibull_k2"):
            fam = make_family(fid)
            lam = fam.source(lam_value)
            back = fam.to_source(fam.to_natural(lam))
            assert abs(back[0] - lam_value) <= 1e-12 * (1.0 + abs(lam_value))

    @given(st.floats(min_value=1e-4, max_value=1 - 1e-4))
    @settings(deadline=None, max_examples=50)
    def test_bernoulli_round_trip(self, p):
        fam = make_family("bernoulli")
        back = fam.to_source(fam.to_natural(fam.source(p)))
        assert abs(back[0] - p) <= 1e-12


class TestLogDensity:
    def test_exponential_at_zero(self):
        fam = make_family("exponential")
        assert fam.log_density(fam.source(1.0), 0.0) == pytest.approx(0.0, abs=1e-15)

    def test_poisson_at_zero(self):
        fam = make_family("poisson")
        assert fam.log_density(fam.source(1.0), 0) == pytest.approx(-1.0, rel=1e-15)

    def test_standard_normal_at_zero(self):
        fam = make_family("gaussian1d")
        assert fam.log_density(fam.source(0.0, 1.0), 0.0) == pytest.approx(
            -0.5 * LOG_2PI, rel=1e-14)

    def test_batch_matches_scalar(self, rng):
        for fid in ("gamma", "beta", "rayleigh"):
            fam = make_family(fid)
            lam = random_source(fam, rng)
            xs = np.asarray(fam.sample(lam, 32, rng))
            batch = fam.log_density_batch(lam, xs)
            singles = [fam.log_density(lam, float(x)) for x in xs]
            np.testing.assert_allclose(batch, singles, rtol=1e-13)

    def test_mvn_batch_matches_scalar(self, rng):
        fam = make_family("mvn", dim=3)
        lam = random_source(fam, rng)
        xs = np.asarray(fam.sample(lam, 16, rng))
        batch = fam.log_density_batch(lam, xs)
        singles = [fam.log_density(lam, x) for x in xs]
        np.testing.assert_allclose(batch, singles, rtol=1e-12)


class TestUnnormalizedDensity:
    def test_exponential_value(self):
        fam = make_family("exponential")
        assert fam.log_unnormalized_density(fam.source(2.0), 3.0) == pytest.approx(-6.0)

    def test_poisson_value(self):
        fam = make_family("poisson")
        got = fam.log_unnormalized_density(fam.source(1.0), 2)
        assert got == pytest.approx(-math.log(2.0), rel=1e-14)

    def test_difference_constant_in_x(self, rng):
        for fid in ("gamma", "poisson", "mvn2", "wishart2", "inverse_gaussian"):
            fam = make_family(fid)
            lam = random_source(fam, rng)
            points = omega_set(fam, rng, 4)
            gaps = [fam.log_density(lam, x) - fam.log_unnormalized_density(lam, x)
                    for x in points]
            np.testing.assert_allclose(gaps, gaps[0], rtol=1e-10, atol=1e-10)


class TestSufficientStat:
    def test_gaussian1d(self):
        fam = make_family("gaussian1d")
        assert tuple(fam.sufficient_stat(3.0).blocks) == (3.0, 9.0)

    def test_dirichlet(self):
        fam = make_family("dirichlet", dim=2)
        stat = fam.sufficient_stat(np.array([0.5, 0.5]))
        np.testing.assert_allclose(stat[0], [math.log(0.5)] * 2)

    def test_centered_mvn_outer_product(self):
        fam = make_family("centered_mvn", dim=2)
        e1 = np.array([1.0, 0.0])
        np.testing.assert_allclose(fam.sufficient_stat(e1)[0], np.outer(e1, e1))


class TestMoment:
    def test_gaussian1d(self):
        fam = make_family("gaussian1d")
        eta = fam.moment(fam.source(1.0, 2.0))
        assert eta[0] == pytest.approx(1.0)
        assert eta[1] == pytest.approx(3.0)

    def test_poisson(self):
        fam = make_family("poisson")
        assert fam.moment(fam.source(2.0))[0] == pytest.approx(2.0)

    def test_gamma(self):
        fam = make_family("gamma")
        eta = fam.moment(fam.source(2.0, 3.0))
        assert eta[0] == pytest.approx(float(digamma(2.0)) - math.log(3.0), rel=1e-14)
        assert eta[1] == pytest.approx(2.0 / 3.0, rel=1e-14)

    def test_gradient_of_implicit_cumulant_is_moment(self, rng):
        # dF/dtheta at theta(lam) must equal E[t(x)] for order-1 families
        for fid in ("exponential", "poisson", "laplace", "rayleigh", "weibull_k2",
                    "bernoulli"):
            fam = make_family(fid)
            lam = random_source(fam, rng)
            omega = omega_set(fam, rng, 1)[0]
            theta = float(fam.to_natural(lam)[0])
            step = 1e-5 * (1.0 + abs(theta))

            def cumulant(t):
                return fam.implicit_cumulant(fam.to_source(fam.natural(t)), omega)

            grad = (cumulant(theta + step) - cumulant(theta - step)) / (2.0 * step)
            target = float(fam.moment(lam)[0])
            assert grad == pytest.approx(target, rel=1e-4), fid


class TestEntropy:
    def test_standard_normal(self):
        fam = make_family("gaussian1d")
        assert fam.entropy(fam.source(0.0, 1.0)) == pytest.approx(
            0.5 * math.log(2.0 * math.pi * math.e), rel=1e-14)

    def test_exponential_unit_rate(self):
        fam = make_family("exponential")
        assert fam.entropy(fam.source(1.0)) == pytest.approx(1.0)

    def test_exponential_matches_quadrature(self):
        fam = make_family("exponential")
        lam = fam.source(0.7)

        def neg_p_log_p(x):
            lp = fam.log_density(lam, x)
            return -math.exp(lp) * lp

        value, _ = quad(neg_p_log_p, 0.0, np.inf)
        assert fam.entropy(lam) == pytest.approx(value, abs=1e-9)

    def test_rayleigh_matches_quadrature(self):
        fam = make_family("rayleigh")
        lam = fam.source(1.3)

        def neg_p_log_p(x):
            lp = fam.log_density(lam, x)
            return -math.exp(lp) * lp

        value, _ = quad(neg_p_log_p, 0.0, np.inf)
        assert fam.entropy(lam) == pytest.approx(value, abs=1e-9)

    def test_unsupported_raises(self):
        fam = make_family("inverse_gaussian")
        with pytest.raises(Unsupported):
            fam.entropy(fam.source(1.0, 1.0))


class TestCarrierExpectation:
    def test_zero_carrier_families(self):
        cases = {"exponential": (1.0,), "gamma": (1.0, 1.0), "beta": (1.0, 1.0),
                 "bernoulli": (0.5,)}
        for fid, values in cases.items():
            fam = make_family(fid)
            assert fam.carrier_expectation(fam.source(*values)) == 0.0

    def test_mvn_carrier_is_triple_constant(self):
        # the fixed canonical triple puts -(d/2) log 2pi in the carrier
        fam = make_family("mvn", dim=2)
        lam = fam.source(np.zeros(2), np.eye(2))
        assert fam.carrier_expectation(lam) == pytest.approx(-LOG_2PI)
        assert fam.carrier(np.zeros(2)) == pytest.approx(-LOG_2PI)

    def test_rayleigh_matches_quadrature(self):
        fam = make_family("rayleigh")
        lam = fam.source(0.9)

        def p_log_x(x):
            return math.exp(fam.log_density(lam, x)) * math.log(x)

        value, _ = quad(p_log_x, 0.0, np.inf)
        assert fam.carrier_expectation(lam) == pytest.approx(value, abs=1e-9)

    def test_weibull_matches_quadrature(self):
        fam = make_family("weibull", shape=3)
        lam = fam.source(1.7)

        def p_carrier(x):
            return math.exp(fam.log_density(lam, x)) * fam.carrier(x)

        value, _ = quad(p_carrier, 0.0, np.inf)
        assert fam.carrier_expectation(lam) == pytest.approx(value, abs=1e-9)


class TestDefaultOmega:
    def test_published_choices(self):
        assert make_family("exponential").default_omega() == 0.0
        assert make_family("weibull", shape=2).default_omega() == 1.0
        assert make_family("rayleigh").default_omega() == 1.0
        assert make_family("gamma").default_omega() == 1.0
        assert make_family("inverse_gaussian").default_omega() == 1.0
        np.testing.assert_allclose(make_family("dirichlet", dim=3).default_omega(),
                                   np.full(3, 1.0 / 3.0))
        np.testing.assert_allclose(make_family("mvn", dim=2).default_omega(), np.zeros(2))
        np.testing.assert_allclose(make_family("wishart", dim=2).default_omega(), np.eye(2))

    def test_default_omega_in_support(self):
        from expfam_div import catalog
        for fam in catalog():
            assert fam.in_support(fam.default_omega()), fam.family_id


class TestImplicitCumulant:
    def test_omega_independent(self, rng):
        from expfam_div import catalog
        for fam in catalog():
            lam = random_source(fam, rng)
            values = [fam.implicit_cumulant(lam, w) for w in omega_set(fam, rng, 5)]
            spread = max(values) - min(values)
            assert spread <= 1e-10 * (1.0 + abs(values[0])), fam.family_id
