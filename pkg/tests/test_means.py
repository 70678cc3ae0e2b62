"""Quasi-arithmetic mean engine: values, properties, Taylor expansion, matrix means."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expfam_div import (
    MeanRequest,
    NaturalDomainViolation,
    Unsupported,
    make_family,
    matrix_harmonic_barycenter,
    qam,
    qam_taylor,
    resolve_mean,
)
from expfam_div import reference as ref
from expfam_div.verify import random_source, random_spd

positive = st.floats(min_value=0.05, max_value=50.0)


class TestQamValues:
    def test_poisson_geometric(self):
        fam = make_family("poisson")
        got = qam(fam, fam.source(1.0), fam.source(4.0))
        assert got[0] == pytest.approx(2.0, rel=1e-14)

    def test_laplace_harmonic(self):
        fam = make_family("laplace")
        got = qam(fam, fam.source(1.0), fam.source(3.0))
        assert got[0] == pytest.approx(1.5, rel=1e-14)

    def test_bernoulli_midpoint(self):
        fam = make_family("bernoulli")
        got = qam(fam, fam.source(0.2), fam.source(0.8))
        assert got[0] == pytest.approx(0.5, rel=1e-14)

    def test_endpoints(self, rng):
        for fid in ("gamma", "poisson", "mvn2"):
            fam = make_family(fid)
            a = random_source(fam, rng)
            b = random_source(fam, rng)
            for got, want in ((qam(fam, a, b, 1.0), a), (qam(fam, a, b, 0.0), b)):
                for g, w in zip(got.blocks, want.blocks):
                    np.testing.assert_allclose(np.asarray(g), np.asarray(w),
                                               rtol=1e-12, atol=1e-13)

    def test_mean_request_resolves(self):
        fam = make_family("poisson")
        req = MeanRequest(fam.family_id, 0.5, fam.source(1.0), fam.source(4.0))
        assert resolve_mean(fam, req)[0] == pytest.approx(2.0, rel=1e-14)

    def test_extrapolation_raises_outside_domain(self):
        fam = make_family("exponential")
        with pytest.raises(NaturalDomainViolation):
            qam(fam, fam.source(1.0), fam.source(3.0), 3.0)  # mixes to -3 < 0


class TestQamProperties:
    @given(positive, positive, st.floats(min_value=0.0, max_value=1.0))
    @settings(deadline=None, max_examples=60)
    def test_internality_scalar(self, a, b, alpha):
        for fid in ("exponential", "poisson", "laplace", "rayleigh", "weibull_k2"):
            fam = make_family(fid)
            got = float(qam(fam, fam.source(a), fam.source(b), alpha)[0])
            assert min(a, b) - 1e-12 <= got <= max(a, b) + 1e-12

    @given(positive, positive)
    @settings(deadline=None, max_examples=40)
    def test_strictly_monotone_in_alpha(self, a, b):
        if abs(a - b) < 1e-6:
            return
        fam = make_family("poisson")
        values = [float(qam(fam, fam.source(a), fam.source(b), t)[0])
                  for t in (0.1, 0.3, 0.5, 0.7, 0.9)]
        diffs = np.diff(values)
        assert np.all(diffs > 0) or np.all(diffs < 0)

    def test_natural_space_linearity(self, rng):
        from expfam_div import catalog
        from expfam_div.params import block_mix
        for fam in catalog():
            a = random_source(fam, rng)
            b = random_source(fam, rng)
            alpha = rng.uniform(0.0, 1.0)
            want = block_mix(alpha, fam.to_natural(a).blocks,
                             1.0 - alpha, fam.to_natural(b).blocks)
            got = fam.to_natural(qam(fam, a, b, alpha))
            for g, w in zip(got.blocks, want):
                np.testing.assert_allclose(np.asarray(g), np.asarray(w),
                                           rtol=1e-12, atol=1e-14)


class TestQamTaylor:
    def test_zeroth_order_exact(self):
        fam = make_family("poisson")
        a, b = fam.source(4.0), fam.source(1.0)
        assert qam_taylor(fam, a, b, 0.0)[0] == pytest.approx(1.0)

    def test_poisson_spot_value(self):
        fam = make_family("poisson")
        a, b = fam.source(4.0), fam.source(1.0)
        approx = float(qam_taylor(fam, a, b, 1e-3)[0])
        exact = float(qam(fam, a, b, 1e-3)[0])
        assert approx == pytest.approx(1.0 + 1e-3 * math.log(4.0), rel=1e-12)
        assert exact == pytest.approx(4.0 ** 1e-3, rel=1e-12)
        assert abs(approx - exact) < 1e-6  # O(alpha^2)

    def test_exact_for_linear_conversion(self, rng):
        fam = make_family("exponential")
        a, b = fam.source(2.0), fam.source(5.0)
        for alpha in (0.1, 0.4, 0.9):
            assert qam_taylor(fam, a, b, alpha)[0] == pytest.approx(
                float(qam(fam, a, b, alpha)[0]), rel=1e-14)

    def test_residual_quadratic_in_alpha(self, rng):
        for fid in ("poisson", "rayleigh", "laplace", "weibull_k3", "bernoulli"):
            fam = make_family(fid)
            a = random_source(fam, rng)
            b = random_source(fam, rng)

            def residual(alpha):
                return abs(float(qam(fam, a, b, alpha)[0])
                           - float(qam_taylor(fam, a, b, alpha)[0]))

            r1, r2 = residual(1e-3), residual(5e-4)
            if r1 < 1e-14:
                continue
            assert r1 / r2 >= 3.5, fid

    def test_unsupported_above_order_one(self):
        fam = make_family("gamma")
        with pytest.raises(Unsupported):
            qam_taylor(fam, fam.source(1.0, 1.0), fam.source(2.0, 2.0), 0.1)


class TestMatrixHarmonicBarycenter:
    def test_identity_case(self):
        m = np.array([[2.0, 0.3], [0.3, 1.0]])
        np.testing.assert_allclose(matrix_harmonic_barycenter(m, m), m, rtol=1e-12)

    def test_scalar_harmonic_on_diagonal(self):
        got = matrix_harmonic_barycenter(np.eye(2), 3.0 * np.eye(2))
        np.testing.assert_allclose(got, 1.5 * np.eye(2), rtol=1e-12)

    def test_spd_closure_on_random_pairs(self, rng):
        for _ in range(100):
            m1 = random_spd(rng, 3)
            m2 = random_spd(rng, 3)
            alpha = rng.uniform(0.0, 1.0)
            out = matrix_harmonic_barycenter(m1, m2, alpha)
            np.linalg.cholesky(out)  # SPD or dies
            np.testing.assert_allclose(out, out.T)


class TestPublishedMeanRegression:
    def test_weibull_power_mean_of_order_minus_k(self, rng):
        for k in (1.0, 2.0, 3.0):
            fam = make_family("weibull", shape=k)
            for _ in range(50):
                a, b = rng.uniform(0.2, 4.0, size=2)
                got = float(qam(fam, fam.source(a), fam.source(b))[0])
                assert got == pytest.approx(ref.mean_power(-k, a, b), rel=1e-10)

    def test_inverse_gaussian_mean(self, rng):
        fam = make_family("inverse_gaussian")
        for _ in range(50):
            a = random_source(fam, rng)
            b = random_source(fam, rng)
            want = ref.mean_inverse_gaussian(a.blocks, b.blocks)
            got = qam(fam, a, b)
            assert float(got[0]) == pytest.approx(want[0], rel=1e-10)
            assert float(got[1]) == pytest.approx(want[1], rel=1e-10)

    def test_wishart_mean(self, rng):
        fam = make_family("wishart", dim=2)
        for _ in range(25):
            a = random_source(fam, rng)
            b = random_source(fam, rng)
            dof, scale = ref.mean_wishart(a[0], a[1], b[0], b[1])
            got = qam(fam, a, b)
            assert float(got[0]) == pytest.approx(dof, rel=1e-12)
            np.testing.assert_allclose(got[1], scale, rtol=1e-10)

    def test_gaussian1d_mean(self, rng):
        fam = make_family("gaussian1d")
        for _ in range(50):
            a = random_source(fam, rng)
            b = random_source(fam, rng)
            want = ref.mean_gaussian1d(a.blocks, b.blocks)
            got = qam(fam, a, b)
            assert float(got[0]) == pytest.approx(want[0], rel=1e-10)
            assert float(got[1]) == pytest.approx(want[1], rel=1e-10)

    def test_mvn_precision_weighted_mean(self, rng):
        fam = make_family("mvn", dim=3)
        for _ in range(25):
            a = random_source(fam, rng)
            b = random_source(fam, rng)
            mu, cov = ref.mean_mvn(a[0], a[1], b[0], b[1])
            got = qam(fam, a, b)
            np.testing.assert_allclose(got[0], mu, rtol=1e-9, atol=1e-12)
            np.testing.assert_allclose(got[1], cov, rtol=1e-9)
