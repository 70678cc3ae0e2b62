"""Gaussian families: univariate, fixed-covariance, full and zero-centered multivariate.

The full multivariate family uses the triple
theta = (Sigma^-1 mu, Sigma^-1 / 2), t(x) = (x, -x x^T), k = -(d/2) log(2 pi),
so the induced mean operator couples a matrix harmonic barycenter of the
covariances with a precision-weighted mean vector.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import InvalidParameter, NaturalDomainViolation, NotSPD
from ..family import ExponentialFamily, Support, UnivariateFamily, spd_cholesky, spd_inverse, spd_logdet
from ..params import Param, ParamKind, symmetrize

_LOG_2PI = math.log(2.0 * math.pi)


class Gaussian1D(UnivariateFamily):
    """Univariate normal with source parameters (mean, variance)."""

    family_id = "gaussian1d"
    order = 2
    layout = ("s", "s")
    support = Support("interval")
    has_omega_solver = True

    def _validate_source(self, blocks):
        if not np.isfinite(blocks[0]):
            raise InvalidParameter("gaussian1d: mean must be finite")
        if not blocks[1] > 0:
            raise InvalidParameter("gaussian1d: variance must be > 0")

    def _validate_natural(self, blocks):
        if not blocks[1] < 0:
            raise NaturalDomainViolation("gaussian1d: second natural coordinate must be < 0")

    def _theta(self, lam):
        mu, var = lam
        return (mu / var, -0.5 / var)

    def _lambda(self, theta):
        t1, t2 = theta
        return (-0.5 * t1 / t2, -0.5 / t2)

    def _suff_stat(self, x):
        return (float(x), float(x) ** 2)

    def _carrier(self, x):
        return 0.0

    def _log_density(self, lam, x):
        mu, var = lam
        return -0.5 * (np.log(2.0 * np.pi * var) + (x - mu) ** 2 / var)

    def in_support(self, x):
        return np.ndim(x) == 0 and np.isfinite(x)

    def default_omega(self):
        return 0.0

    def _moment(self, lam):
        mu, var = lam
        return (mu, mu * mu + var)

    def _entropy(self, lam):
        return 0.5 * math.log(2.0 * math.pi * math.e * lam[1])

    def _carrier_expectation(self, lam):
        return 0.0

    def _omega_points(self, lam):
        mu, var = lam
        sigma = math.sqrt(var)
        return [mu - sigma, mu + sigma]

    def _sample(self, lam, n, rng):
        mu, var = lam
        return mu + math.sqrt(var) * rng.standard_normal(n)


class FixedCovGaussian(ExponentialFamily):
    """Multivariate normal with a covariance fixed at construction time.

    The source parameter is the mean vector; the carrier absorbs the whole
    quadratic term, so t(x) = x and theta = Sigma^-1 mu.
    """

    order: int
    has_omega_solver = True

    def __init__(self, cov):
        cov = np.asarray(cov, dtype=float)
        self._chol = spd_cholesky(cov)
        self.cov = symmetrize(cov)
        d = cov.shape[0]
        self.order = d
        self.sample_dim = d
        self.family_id = f"gaussian_fixed_cov{d}"
        self.layout = (("v", d),)
        self.support = Support("euclidean", dim=d)
        self.precision = spd_inverse(cov)
        self._logdet = spd_logdet(cov)

    def _validate_source(self, blocks):
        if not np.all(np.isfinite(blocks[0])):
            raise InvalidParameter(f"{self.family_id}: mean must be finite")

    def _validate_natural(self, blocks):
        if not np.all(np.isfinite(blocks[0])):
            raise NaturalDomainViolation(f"{self.family_id}: natural parameter must be finite")

    def _theta(self, lam):
        return (self.precision @ lam[0],)

    def _lambda(self, theta):
        return (self.cov @ theta[0],)

    def _suff_stat(self, x):
        return (np.asarray(x, dtype=float),)

    def _carrier(self, x):
        x = np.asarray(x, dtype=float)
        return float(-0.5 * x @ self.precision @ x
                     - 0.5 * self.sample_dim * _LOG_2PI - 0.5 * self._logdet)

    def _log_density(self, lam, x):
        delta = np.asarray(x, dtype=float) - lam[0]
        maha = delta @ self.precision @ delta
        return -0.5 * (self.sample_dim * _LOG_2PI + self._logdet + maha)

    def log_density_batch(self, lam, xs):
        self._check(lam, ParamKind.SOURCE)
        delta = np.asarray(xs, dtype=float) - lam.blocks[0]
        maha = np.einsum("ni,ij,nj->n", delta, self.precision, delta)
        return -0.5 * (self.sample_dim * _LOG_2PI + self._logdet + maha)

    def in_support(self, x):
        x = np.asarray(x)
        return x.ndim == 1 and x.shape[0] == self.sample_dim and np.all(np.isfinite(x))

    def default_omega(self):
        return np.zeros(self.sample_dim)

    def _moment(self, lam):
        return (lam[0],)

    def _entropy(self, lam):
        return 0.5 * (self.sample_dim * (1.0 + _LOG_2PI) + self._logdet)

    def _carrier_expectation(self, lam):
        mu = lam[0]
        maha = float(mu @ self.precision @ mu)
        return -0.5 * (maha + self.sample_dim) - 0.5 * self.sample_dim * _LOG_2PI \
            - 0.5 * self._logdet

    def _omega_points(self, lam):
        return [np.array(lam[0], dtype=float)]

    def _sample(self, lam, n, rng):
        z = rng.standard_normal((n, self.sample_dim))
        return lam[0] + z @ self._chol.T


def _sigma_columns(cov: np.ndarray) -> np.ndarray:
    """Columns sqrt(d * eig_i) e_i of the (non-symmetric) square root of d * cov."""
    d = cov.shape[0]
    evals, evecs = np.linalg.eigh(symmetrize(cov))
    if np.any(evals <= 0):
        raise NotSPD("covariance is not positive definite")
    return evecs * np.sqrt(d * evals)


class MultivariateGaussian(ExponentialFamily):
    """Full d-dimensional normal family with source parameters (mean, covariance)."""

    has_omega_solver = True

    def __init__(self, dim: int):
        dim = int(dim)
        if dim < 1:
            raise InvalidParameter("mvn: dimension must be >= 1")
        d = dim
        self.sample_dim = d
        self.order = d + d * (d + 1) // 2
        self.family_id = f"mvn{d}"
        self.layout = (("v", d), ("m", d))
        self.support = Support("euclidean", dim=d)

    def _validate_source(self, blocks):
        mu, cov = blocks
        if not np.all(np.isfinite(mu)):
            raise InvalidParameter(f"{self.family_id}: mean must be finite")
        spd_cholesky(cov)

    def _validate_natural(self, blocks):
        t1, t2 = blocks
        if not np.all(np.isfinite(t1)):
            raise NaturalDomainViolation(f"{self.family_id}: natural vector must be finite")
        try:
            spd_cholesky(t2)
        except NotSPD as exc:
            raise NaturalDomainViolation(
                f"{self.family_id}: natural matrix block must be positive definite") from exc

    def _theta(self, lam):
        mu, cov = lam
        prec = spd_inverse(cov)
        return (prec @ mu, 0.5 * prec)

    def _lambda(self, theta):
        t1, t2 = theta
        cov = 0.5 * spd_inverse(t2)
        return (cov @ t1, cov)

    def _suff_stat(self, x):
        x = np.asarray(x, dtype=float)
        return (x, -np.outer(x, x))

    def _carrier(self, x):
        return -0.5 * self.sample_dim * _LOG_2PI

    def _log_density(self, lam, x):
        mu, cov = lam
        delta = np.asarray(x, dtype=float) - mu
        chol = spd_cholesky(cov)
        w = np.linalg.solve(chol, delta)
        logdet = 2.0 * np.sum(np.log(np.diag(chol)))
        return -0.5 * (self.sample_dim * _LOG_2PI + logdet + w @ w)

    def log_density_batch(self, lam, xs):
        self._check(lam, ParamKind.SOURCE)
        mu, cov = lam.blocks
        chol = spd_cholesky(cov)
        delta = np.asarray(xs, dtype=float) - mu
        w = np.linalg.solve(chol, delta.T)
        logdet = 2.0 * np.sum(np.log(np.diag(chol)))
        return -0.5 * (self.sample_dim * _LOG_2PI + logdet + np.sum(w * w, axis=0))

    def in_support(self, x):
        x = np.asarray(x)
        return x.ndim == 1 and x.shape[0] == self.sample_dim and np.all(np.isfinite(x))

    def default_omega(self):
        return np.zeros(self.sample_dim)

    def _moment(self, lam):
        mu, cov = lam
        return (np.array(mu), -(np.outer(mu, mu) + cov))

    def _entropy(self, lam):
        return 0.5 * (self.sample_dim * (1.0 + _LOG_2PI) + spd_logdet(lam[1]))

    def _carrier_expectation(self, lam):
        return -0.5 * self.sample_dim * _LOG_2PI

    def _omega_points(self, lam):
        mu, cov = lam
        cols = _sigma_columns(cov)
        points = []
        for i in range(self.sample_dim):
            points.append(mu - cols[:, i])
            points.append(mu + cols[:, i])
        return points

    def _sample(self, lam, n, rng):
        mu, cov = lam
        z = rng.standard_normal((n, self.sample_dim))
        return mu + z @ spd_cholesky(cov).T


class CenteredGaussian(ExponentialFamily):
    """Zero-mean multivariate normal; the source parameter is the covariance alone."""

    has_omega_solver = True

    def __init__(self, dim: int):
        dim = int(dim)
        if dim < 1:
            raise InvalidParameter("centered_mvn: dimension must be >= 1")
        self.sample_dim = dim
        self.order = dim * (dim + 1) // 2
        self.family_id = f"centered_mvn{dim}"
        self.layout = (("m", dim),)
        self.support = Support("euclidean", dim=dim)

    def _validate_source(self, blocks):
        spd_cholesky(blocks[0])

    def _validate_natural(self, blocks):
        try:
            spd_cholesky(-np.asarray(blocks[0]))
        except NotSPD as exc:
            raise NaturalDomainViolation(
                f"{self.family_id}: natural matrix must be negative definite") from exc

    def _theta(self, lam):
        return (-0.5 * spd_inverse(lam[0]),)

    def _lambda(self, theta):
        return (0.5 * spd_inverse(-np.asarray(theta[0])),)

    def _suff_stat(self, x):
        x = np.asarray(x, dtype=float)
        return (np.outer(x, x),)

    def _carrier(self, x):
        return -0.5 * self.sample_dim * _LOG_2PI

    def _log_density(self, lam, x):
        chol = spd_cholesky(lam[0])
        w = np.linalg.solve(chol, np.asarray(x, dtype=float))
        logdet = 2.0 * np.sum(np.log(np.diag(chol)))
        return -0.5 * (self.sample_dim * _LOG_2PI + logdet + w @ w)

    def log_density_batch(self, lam, xs):
        self._check(lam, ParamKind.SOURCE)
        chol = spd_cholesky(lam.blocks[0])
        w = np.linalg.solve(chol, np.asarray(xs, dtype=float).T)
        logdet = 2.0 * np.sum(np.log(np.diag(chol)))
        return -0.5 * (self.sample_dim * _LOG_2PI + logdet + np.sum(w * w, axis=0))

    def in_support(self, x):
        x = np.asarray(x)
        return x.ndim == 1 and x.shape[0] == self.sample_dim and np.all(np.isfinite(x))

    def default_omega(self):
        return np.zeros(self.sample_dim)

    def _moment(self, lam):
        return (np.array(lam[0]),)

    def _entropy(self, lam):
        return 0.5 * (self.sample_dim * (1.0 + _LOG_2PI) + spd_logdet(lam[0]))

    def _carrier_expectation(self, lam):
        return -0.5 * self.sample_dim * _LOG_2PI

    def _omega_points(self, lam):
        cols = _sigma_columns(lam[0])
        return [cols[:, i].copy() for i in range(self.sample_dim)]

    def _sample(self, lam, n, rng):
        z = rng.standard_normal((n, self.sample_dim))
        return z @ spd_cholesky(lam[0]).T


__all__ = ["CenteredGaussian", "FixedCovGaussian", "Gaussian1D", "MultivariateGaussian"]
