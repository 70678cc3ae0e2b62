"""Gamma, Beta, Dirichlet and inverse Gaussian families."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import betaln, digamma, gammaln

from ..errors import DegenerateSolution, InvalidParameter, NaturalDomainViolation
from ..family import ExponentialFamily, Support, UnivariateFamily
from ..params import ParamKind
from .univariate import gamma_marsaglia_tsang

_LOG_2PI = math.log(2.0 * math.pi)


class Gamma(UnivariateFamily):
    """Gamma with shape/rate source parameters (a, b) on (0, inf).

    theta = (a - 1, -b), t(x) = (log x, x), k = 0; the induced mean is the
    componentwise arithmetic mean of (a, b).
    """

    family_id = "gamma"
    order = 2
    layout = ("s", "s")
    support = Support("interval", 0.0, math.inf, lower_open=True)
    has_omega_solver = True

    def _validate_source(self, blocks):
        if not (blocks[0] > 0 and blocks[1] > 0):
            raise InvalidParameter("gamma: shape and rate must be > 0")

    def _validate_natural(self, blocks):
        if not (blocks[0] > -1 and blocks[1] < 0):
            raise NaturalDomainViolation("gamma: natural domain is theta1 > -1, theta2 < 0")

    def _theta(self, lam):
        return (lam[0] - 1.0, -lam[1])

    def _lambda(self, theta):
        return (theta[0] + 1.0, -theta[1])

    def _suff_stat(self, x):
        return (math.log(x), float(x))

    def _carrier(self, x):
        return 0.0

    def _log_density(self, lam, x):
        a, b = lam
        return a * np.log(b) - gammaln(a) + (a - 1.0) * np.log(x) - b * x

    def in_support(self, x):
        return np.ndim(x) == 0 and float(x) > 0.0

    def default_omega(self):
        return 1.0

    def _moment(self, lam):
        a, b = lam
        return (digamma(a) - np.log(b), a / b)

    def _entropy(self, lam):
        a, b = lam
        return float(a - np.log(b) + gammaln(a) + (1.0 - a) * digamma(a))

    def _carrier_expectation(self, lam):
        return 0.0

    def _omega_points(self, lam):
        a_mean = lam[0] / lam[1]
        log_mean = float(digamma(lam[0]) - np.log(lam[1]))
        disc = a_mean * a_mean - math.exp(2.0 * log_mean)
        if disc <= 0.0:
            raise DegenerateSolution("gamma: degenerate two-point system")
        root = math.sqrt(disc)
        return [a_mean - root, a_mean + root]

    def _sample(self, lam, n, rng):
        return gamma_marsaglia_tsang(rng, float(lam[0]), n) / lam[1]


class Beta(UnivariateFamily):
    """Beta on (0, 1) with shape source parameters (a, b).

    theta = (a - 1, b - 1), t(x) = (log x, log(1 - x)), k = 0.
    """

    family_id = "beta"
    order = 2
    layout = ("s", "s")
    support = Support("interval", 0.0, 1.0, lower_open=True)
    has_omega_solver = True

    def _validate_source(self, blocks):
        if not (blocks[0] > 0 and blocks[1] > 0):
            raise InvalidParameter("beta: both shapes must be > 0")

    def _validate_natural(self, blocks):
        if not (blocks[0] > -1 and blocks[1] > -1):
            raise NaturalDomainViolation("beta: natural domain is theta1 > -1, theta2 > -1")

    def _theta(self, lam):
        return (lam[0] - 1.0, lam[1] - 1.0)

    def _lambda(self, theta):
        return (theta[0] + 1.0, theta[1] + 1.0)

    def _suff_stat(self, x):
        return (math.log(x), math.log1p(-x))

    def _carrier(self, x):
        return 0.0

    def _log_density(self, lam, x):
        a, b = lam
        return (a - 1.0) * np.log(x) + (b - 1.0) * np.log1p(-x) - betaln(a, b)

    def in_support(self, x):
        return np.ndim(x) == 0 and 0.0 < float(x) < 1.0

    def default_omega(self):
        return 0.5

    def _moment(self, lam):
        a, b = lam
        return (digamma(a) - digamma(a + b), digamma(b) - digamma(a + b))

    def _entropy(self, lam):
        a, b = lam
        return float(betaln(a, b) - (a - 1.0) * digamma(a) - (b - 1.0) * digamma(b)
                     + (a + b - 2.0) * digamma(a + b))

    def _carrier_expectation(self, lam):
        return 0.0

    def _omega_points(self, lam):
        # two in-support points whose log/log1p averages match the moments;
        # float underflow near the parameter boundary can push the quadratic
        # roots out of (0, 1), which callers must treat as absent
        m1, m2 = self._moment(lam)
        a = math.exp(2.0 * float(m1))
        b = math.exp(2.0 * float(m2))
        s = 1.0 + a - b
        disc = s * s - 4.0 * a
        if disc < 0.0:
            raise DegenerateSolution("beta: negative discriminant in two-point system")
        root = math.sqrt(disc)
        w1 = 0.5 * (s - root)
        w2 = 0.5 * (s + root)
        if not (0.0 < w1 < 1.0 and 0.0 < w2 < 1.0):
            raise DegenerateSolution("beta: two-point solution escapes the open unit interval")
        return [w1, w2]

    def _sample(self, lam, n, rng):
        g1 = gamma_marsaglia_tsang(rng, float(lam[0]), n)
        g2 = gamma_marsaglia_tsang(rng, float(lam[1]), n)
        return g1 / (g1 + g2)


class Dirichlet(ExponentialFamily):
    """Dirichlet on the open standard simplex; concentration vector source parameter."""

    def __init__(self, dim: int):
        dim = int(dim)
        if dim < 2:
            raise InvalidParameter("dirichlet: dimension must be >= 2")
        self.sample_dim = dim
        self.order = dim
        self.family_id = f"dirichlet{dim}"
        self.layout = (("v", dim),)
        self.support = Support("simplex", dim=dim)
        self.has_omega_solver = dim == 2

    def _validate_source(self, blocks):
        if not np.all(np.asarray(blocks[0]) > 0):
            raise InvalidParameter(f"{self.family_id}: concentrations must be > 0")

    def _validate_natural(self, blocks):
        if not np.all(np.asarray(blocks[0]) > -1):
            raise NaturalDomainViolation(f"{self.family_id}: natural domain is theta_i > -1")

    def _theta(self, lam):
        return (np.asarray(lam[0]) - 1.0,)

    def _lambda(self, theta):
        return (np.asarray(theta[0]) + 1.0,)

    def _suff_stat(self, x):
        return (np.log(np.asarray(x, dtype=float)),)

    def _carrier(self, x):
        return 0.0

    def _log_b(self, alpha):
        return float(np.sum(gammaln(alpha)) - gammaln(np.sum(alpha)))

    def _log_density(self, lam, x):
        alpha = np.asarray(lam[0])
        return float(np.sum((alpha - 1.0) * np.log(np.asarray(x))) - self._log_b(alpha))

    def log_density_batch(self, lam, xs):
        self._check(lam, ParamKind.SOURCE)
        alpha = np.asarray(lam.blocks[0])
        return np.log(np.asarray(xs, dtype=float)) @ (alpha - 1.0) - self._log_b(alpha)

    def in_support(self, x):
        x = np.asarray(x)
        return (x.ndim == 1 and x.shape[0] == self.sample_dim and np.all(x > 0)
                and abs(float(np.sum(x)) - 1.0) < 1e-9)

    def default_omega(self):
        return np.full(self.sample_dim, 1.0 / self.sample_dim)

    def _moment(self, lam):
        alpha = np.asarray(lam[0])
        return (digamma(alpha) - digamma(np.sum(alpha)),)

    def _entropy(self, lam):
        alpha = np.asarray(lam[0])
        total = float(np.sum(alpha))
        return float(self._log_b(alpha) + (total - self.sample_dim) * digamma(total)
                     - np.sum((alpha - 1.0) * digamma(alpha)))

    def _carrier_expectation(self, lam):
        return 0.0

    def _omega_points(self, lam):
        # d = 2 reduces to the Beta system through x -> (x, 1 - x)
        beta = Beta()
        roots = beta._omega_points((float(lam[0][0]), float(lam[0][1])))
        return [np.array([w, 1.0 - w]) for w in roots]

    def _sample(self, lam, n, rng):
        alpha = np.asarray(lam[0])
        cols = [gamma_marsaglia_tsang(rng, float(a), n) for a in alpha]
        g = np.stack(cols, axis=1)
        return g / np.sum(g, axis=1, keepdims=True)


class InverseGaussian(UnivariateFamily):
    """Inverse Gaussian (Wald) with source parameters (mean, shape) on (0, inf).

    theta = (-shape / (2 mean^2), -shape / 2), t(x) = (x, 1/x),
    k(x) = -(3/2) log x - (1/2) log(2 pi); the induced mean is non-separable.
    """

    family_id = "inverse_gaussian"
    order = 2
    layout = ("s", "s")
    support = Support("interval", 0.0, math.inf, lower_open=True)
    has_entropy = False
    has_carrier_expectation = False

    def _validate_source(self, blocks):
        if not (blocks[0] > 0 and blocks[1] > 0):
            raise InvalidParameter("inverse_gaussian: mean and shape must be > 0")

    def _validate_natural(self, blocks):
        if not (blocks[0] < 0 and blocks[1] < 0):
            raise NaturalDomainViolation("inverse_gaussian: natural domain is theta1, theta2 < 0")

    def _theta(self, lam):
        mu, shape = lam
        return (-shape / (2.0 * mu * mu), -0.5 * shape)

    def _lambda(self, theta):
        t1, t2 = theta
        return (np.sqrt(t2 / t1), -2.0 * t2)

    def _suff_stat(self, x):
        return (float(x), 1.0 / float(x))

    def _carrier(self, x):
        return -1.5 * math.log(x) - 0.5 * _LOG_2PI

    def _log_density(self, lam, x):
        mu, shape = lam
        return (0.5 * np.log(shape) - 0.5 * _LOG_2PI - 1.5 * np.log(x)
                - shape * (x - mu) ** 2 / (2.0 * mu * mu * x))

    def in_support(self, x):
        return np.ndim(x) == 0 and float(x) > 0.0

    def default_omega(self):
        return 1.0

    def _moment(self, lam):
        mu, shape = lam
        return (mu, 1.0 / mu + 1.0 / shape)

    def _sample(self, lam, n, rng):
        # Michael–Schucany–Haas transform of a squared normal
        mu, shape = lam
        nu = rng.standard_normal(n) ** 2
        x = mu + mu * mu * nu / (2.0 * shape) \
            - mu / (2.0 * shape) * np.sqrt(4.0 * mu * shape * nu + mu * mu * nu * nu)
        u = rng.random(n)
        return np.where(u <= mu / (mu + x), x, mu * mu / x)


__all__ = ["Beta", "Dirichlet", "Gamma", "InverseGaussian"]
