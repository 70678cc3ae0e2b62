"""Central Wishart family on the SPD cone."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import digamma, multigammaln

from ..errors import InvalidParameter, NaturalDomainViolation, NotSPD
from ..family import ExponentialFamily, Support, spd_cholesky, spd_inverse, spd_logdet
from ..params import ParamKind, symmetrize
from .univariate import gamma_marsaglia_tsang

_LOG2 = math.log(2.0)


def multidigamma(a: float, d: int) -> float:
    """Derivative of log of the multivariate gamma function."""
    return float(np.sum(digamma(a + 0.5 * (1.0 - np.arange(1, d + 1)))))


class Wishart(ExponentialFamily):
    """Central Wishart with source parameters (dof n > d - 1, scale S SPD).

    theta = ((n - d - 1)/2, -S^-1/2), t(X) = (log|X|, X), k = 0; the induced
    mean pairs an arithmetic mean on the dof with a matrix harmonic mean on
    the scale.
    """

    has_omega_solver = False

    def __init__(self, dim: int):
        dim = int(dim)
        if dim < 1:
            raise InvalidParameter("wishart: dimension must be >= 1")
        self.sample_dim = dim
        self.order = 1 + dim * (dim + 1) // 2
        self.family_id = f"wishart{dim}"
        self.layout = ("s", ("m", dim))
        self.support = Support("spd", dim=dim)

    def _validate_source(self, blocks):
        n, scale = blocks
        if not n > self.sample_dim - 1:
            raise InvalidParameter(
                f"{self.family_id}: degrees of freedom must exceed dim - 1")
        spd_cholesky(scale)

    def _validate_natural(self, blocks):
        ts, tm = blocks
        if not ts > -1.0:
            raise NaturalDomainViolation(f"{self.family_id}: scalar natural block must be > -1")
        try:
            spd_cholesky(-np.asarray(tm))
        except NotSPD as exc:
            raise NaturalDomainViolation(
                f"{self.family_id}: matrix natural block must be negative definite") from exc

    def _theta(self, lam):
        n, scale = lam
        return (0.5 * (n - self.sample_dim - 1.0), -0.5 * spd_inverse(scale))

    def _lambda(self, theta):
        ts, tm = theta
        return (2.0 * ts + self.sample_dim + 1.0, 0.5 * spd_inverse(-np.asarray(tm)))

    def _suff_stat(self, x):
        x = np.asarray(x, dtype=float)
        return (spd_logdet(x), x)

    def _carrier(self, x):
        return 0.0

    def _log_density(self, lam, x):
        n, scale = lam
        d = self.sample_dim
        x = np.asarray(x, dtype=float)
        prec = spd_inverse(scale)
        return (0.5 * (n - d - 1.0) * spd_logdet(x) - 0.5 * float(np.sum(prec * x))
                - 0.5 * n * d * _LOG2 - 0.5 * n * spd_logdet(scale)
                - float(multigammaln(0.5 * n, d)))

    def log_density_batch(self, lam, xs):
        self._check(lam, ParamKind.SOURCE)
        n, scale = lam.blocks
        d = self.sample_dim
        xs = np.asarray(xs, dtype=float)
        prec = spd_inverse(scale)
        sign, logdets = np.linalg.slogdet(xs)
        traces = np.einsum("ij,nij->n", prec, xs)
        return (0.5 * (n - d - 1.0) * logdets - 0.5 * traces
                - 0.5 * n * d * _LOG2 - 0.5 * n * spd_logdet(scale)
                - float(multigammaln(0.5 * n, d)))

    def in_support(self, x):
        x = np.asarray(x)
        if x.ndim != 2 or x.shape != (self.sample_dim, self.sample_dim):
            return False
        try:
            spd_cholesky(x)
        except NotSPD:
            return False
        return True

    def default_omega(self):
        return np.eye(self.sample_dim)

    def _moment(self, lam):
        n, scale = lam
        d = self.sample_dim
        e_logdet = d * _LOG2 + spd_logdet(scale) + multidigamma(0.5 * n, d)
        return (e_logdet, n * np.asarray(scale))

    def _entropy(self, lam):
        n, scale = lam
        d = self.sample_dim
        return (0.5 * (d + 1.0) * spd_logdet(scale) + 0.5 * d * (d + 1.0) * _LOG2
                + float(multigammaln(0.5 * n, d))
                - 0.5 * (n - d - 1.0) * multidigamma(0.5 * n, d) + 0.5 * n * d)

    def _carrier_expectation(self, lam):
        return 0.0

    def _sample(self, lam, n_draws, rng):
        # Bartlett decomposition: X = L A A^T L^T with chi-square diagonal
        n, scale = lam
        d = self.sample_dim
        chol = spd_cholesky(scale)
        out = np.empty((n_draws, d, d))
        diag = np.empty((n_draws, d))
        for i in range(d):
            diag[:, i] = np.sqrt(2.0 * gamma_marsaglia_tsang(rng, 0.5 * (n - i), n_draws))
        tril = np.zeros((n_draws, d, d))
        idx = np.tril_indices(d, k=-1)
        if idx[0].size:
            tril[:, idx[0], idx[1]] = rng.standard_normal((n_draws, idx[0].size))
        tril[:, np.arange(d), np.arange(d)] = diag
        for m in range(n_draws):
            la = chol @ tril[m]
            out[m] = symmetrize(la @ la.T)
        return out


__all__ = ["Wishart", "multidigamma"]
