"""Order-1 families with scalar samples.

Canonical triples (theta(lam); t(x); k(x)) are fixed once per family and never
changed; every published density below is regression-tested against
exp(theta.t(x) + k(x) - F) with F recovered from the density itself.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from ..errors import InvalidParameter, NaturalDomainViolation
from ..family import Support, UnivariateFamily

_LOG2 = math.log(2.0)
_EULER = np.euler_gamma


def _require(cond: bool, message: str, cls=InvalidParameter) -> None:
    if not cond:
        raise cls(message)


class Exponential(UnivariateFamily):
    """Rate-parameterized exponential distributions: p(x) = lam * exp(-lam x) on [0, inf).

    theta(lam) = lam, t(x) = -x, k = 0; the induced mean is arithmetic.
    """

    family_id = "exponential"
    order = 1
    layout = ("s",)
    support = Support("interval", 0.0, math.inf)

    def _validate_source(self, blocks):
        _require(blocks[0] > 0, "exponential: rate must be > 0")

    def _validate_natural(self, blocks):
        _require(blocks[0] > 0, "exponential: natural parameter must be > 0",
                 NaturalDomainViolation)

    def _theta(self, lam):
        return (lam[0],)

    def _lambda(self, theta):
        return (theta[0],)

    def natural_derivative(self, lam):
        return 1.0

    def _suff_stat(self, x):
        return (-x,)

    def _carrier(self, x):
        return 0.0

    def _log_density(self, lam, x):
        rate = lam[0]
        return np.log(rate) - rate * x

    def in_support(self, x):
        return np.ndim(x) == 0 and float(x) >= 0.0

    def default_omega(self):
        return 0.0

    def _moment(self, lam):
        return (-1.0 / lam[0],)

    def _entropy(self, lam):
        return 1.0 - math.log(lam[0])

    def _carrier_expectation(self, lam):
        return 0.0

    has_omega_solver = True

    def _omega_points(self, lam):
        return [1.0 / lam[0]]

    def _sample(self, lam, n, rng):
        return -np.log1p(-rng.random(n)) / lam[0]


class Poisson(UnivariateFamily):
    """Poisson counts: p(x) = lam^x exp(-lam) / x!; theta = log lam, geometric mean."""

    family_id = "poisson"
    order = 1
    layout = ("s",)
    support = Support("integers")
    is_discrete = True

    def _validate_source(self, blocks):
        _require(blocks[0] > 0, "poisson: intensity must be > 0")

    def _validate_natural(self, blocks):
        _require(np.isfinite(blocks[0]), "poisson: natural parameter must be finite",
                 NaturalDomainViolation)

    def _theta(self, lam):
        return (np.log(lam[0]),)

    def _lambda(self, theta):
        return (np.exp(theta[0]),)

    def natural_derivative(self, lam):
        return 1.0 / float(lam.blocks[0])

    def _suff_stat(self, x):
        return (float(x),)

    def _carrier(self, x):
        return -float(gammaln(x + 1.0))

    def _log_density(self, lam, x):
        lam0 = lam[0]
        return x * np.log(lam0) - lam0 - gammaln(np.asarray(x) + 1.0)

    def in_support(self, x):
        return np.ndim(x) == 0 and float(x) >= 0 and float(x) == int(x)

    def default_omega(self):
        return 0

    def _moment(self, lam):
        return (lam[0],)

    def _pmf_grid(self, lam0):
        # covers all but < 1e-15 of the mass; geometric tail ratio < 1/2 at the cut
        hi = int(math.ceil(max(2.0 * lam0, lam0 + 12.0 * math.sqrt(lam0) + 60.0)))
        ks = np.arange(0, hi + 1, dtype=float)
        logp = ks * math.log(lam0) - lam0 - gammaln(ks + 1.0)
        return ks, np.exp(logp)

    def _entropy(self, lam):
        # no closed form: truncated series with negligible tail mass
        ks, p = self._pmf_grid(lam[0])
        logp = np.where(p > 0, np.log(np.where(p > 0, p, 1.0)), 0.0)
        return float(-np.sum(p * logp))

    def _carrier_expectation(self, lam):
        ks, p = self._pmf_grid(lam[0])
        return float(-np.sum(p * gammaln(ks + 1.0)))

    def _sample(self, lam, n, rng):
        lam0 = float(lam[0])
        # inversion is exact but O(lam); split big intensities additively
        chunks = max(1, int(math.ceil(lam0 / 30.0)))
        total = np.zeros(n)
        part = lam0 / chunks
        for _ in range(chunks):
            u = rng.random(n)
            k = np.zeros(n)
            term = np.full(n, math.exp(-part))
            cdf = term.copy()
            active = u > cdf
            while active.any():
                k[active] += 1.0
                term[active] *= part / k[active]
                cdf[active] += term[active]
                active = u > cdf
            total += k
        return total


class Laplace(UnivariateFamily):
    """Zero-centered Laplace: p(x) = exp(-|x|/lam) / (2 lam) on R; harmonic mean."""

    family_id = "laplace"
    order = 1
    layout = ("s",)
    support = Support("interval")
    has_entropy = False

    def _validate_source(self, blocks):
        _require(blocks[0] > 0, "laplace: scale must be > 0")

    def _validate_natural(self, blocks):
        _require(blocks[0] > 0, "laplace: natural parameter must be > 0",
                 NaturalDomainViolation)

    def _theta(self, lam):
        return (1.0 / lam[0],)

    def _lambda(self, theta):
        return (1.0 / theta[0],)

    def natural_derivative(self, lam):
        return -1.0 / float(lam.blocks[0]) ** 2

    def _suff_stat(self, x):
        return (-abs(float(x)),)

    def _carrier(self, x):
        return -_LOG2

    def _log_density(self, lam, x):
        scale = lam[0]
        return -np.log(2.0 * scale) - np.abs(x) / scale

    def in_support(self, x):
        return np.ndim(x) == 0 and np.isfinite(x)

    def default_omega(self):
        return 0.0

    def _moment(self, lam):
        return (-lam[0],)

    def _carrier_expectation(self, lam):
        return -_LOG2

    has_omega_solver = True

    def _omega_points(self, lam):
        # t(w) = -|w| hits the moment -lam at w = lam (positive root chosen)
        return [lam[0]]

    def _sample(self, lam, n, rng):
        signs = np.where(rng.random(n) < 0.5, -1.0, 1.0)
        return signs * (-np.log1p(-rng.random(n))) * lam[0]


class Weibull(UnivariateFamily):
    """Weibull with a prescribed shape; each shape is a distinct family.

    p(x) = (k/lam) (x/lam)^(k-1) exp(-(x/lam)^k) on (0, inf);
    theta(lam) = lam^-k, so the induced mean is the power mean of order -k.
    """

    order = 1
    layout = ("s",)
    has_entropy = False
    has_omega_solver = True

    def __init__(self, shape: float):
        if not shape > 0:
            raise InvalidParameter("weibull: shape must be > 0")
        self.shape = float(shape)
        self.family_id = f"weibull_k{shape:g}"
        lower_open = self.shape != 1.0
        self.support = Support("interval", 0.0, math.inf, lower_open=lower_open)

    def _validate_source(self, blocks):
        _require(blocks[0] > 0, "weibull: scale must be > 0")

    def _validate_natural(self, blocks):
        _require(blocks[0] > 0, "weibull: natural parameter must be > 0",
                 NaturalDomainViolation)

    def _theta(self, lam):
        return (lam[0] ** (-self.shape),)

    def _lambda(self, theta):
        return (theta[0] ** (-1.0 / self.shape),)

    def natural_derivative(self, lam):
        return -self.shape * float(lam.blocks[0]) ** (-self.shape - 1.0)

    def _suff_stat(self, x):
        return (-float(x) ** self.shape,)

    def _carrier(self, x):
        if self.shape == 1.0:
            return 0.0
        return math.log(self.shape) + (self.shape - 1.0) * math.log(x)

    def _log_density(self, lam, x):
        k = self.shape
        scale = lam[0]
        logx = np.log(x) if k != 1.0 else 0.0
        return np.log(k) - k * np.log(scale) + (k - 1.0) * logx - (x / scale) ** k

    def in_support(self, x):
        if np.ndim(x) != 0:
            return False
        return float(x) > 0.0 or (self.shape == 1.0 and float(x) == 0.0)

    def default_omega(self):
        return 1.0

    def _moment(self, lam):
        # E[x^k] = lam^k since (x/lam)^k is unit exponential
        return (-lam[0] ** self.shape,)

    def _carrier_expectation(self, lam):
        if self.shape == 1.0:
            return 0.0
        return math.log(self.shape) + (self.shape - 1.0) * (math.log(lam[0]) - _EULER / self.shape)

    def _omega_points(self, lam):
        return [lam[0]]

    def _sample(self, lam, n, rng):
        return lam[0] * (-np.log1p(-rng.random(n))) ** (1.0 / self.shape)


class Rayleigh(UnivariateFamily):
    """Rayleigh with scale sigma: p(x) = (x/s^2) exp(-x^2 / (2 s^2)) on (0, inf)."""

    family_id = "rayleigh"
    order = 1
    layout = ("s",)
    support = Support("interval", 0.0, math.inf, lower_open=True)
    has_omega_solver = True

    def _validate_source(self, blocks):
        _require(blocks[0] > 0, "rayleigh: scale must be > 0")

    def _validate_natural(self, blocks):
        _require(blocks[0] < 0, "rayleigh: natural parameter must be < 0",
                 NaturalDomainViolation)

    def _theta(self, lam):
        return (-0.5 / lam[0] ** 2,)

    def _lambda(self, theta):
        return (np.sqrt(-0.5 / theta[0]),)

    def natural_derivative(self, lam):
        return float(lam.blocks[0]) ** (-3.0)

    def _suff_stat(self, x):
        return (float(x) ** 2,)

    def _carrier(self, x):
        return math.log(x)

    def _log_density(self, lam, x):
        s = lam[0]
        return np.log(x) - 2.0 * np.log(s) - x * x / (2.0 * s * s)

    def in_support(self, x):
        return np.ndim(x) == 0 and float(x) > 0.0

    def default_omega(self):
        return 1.0

    def _moment(self, lam):
        return (2.0 * lam[0] ** 2,)

    def _entropy(self, lam):
        return 1.0 + math.log(lam[0] / math.sqrt(2.0)) + _EULER / 2.0

    def _carrier_expectation(self, lam):
        # E[log x] with x = lam * sqrt(2 E), E unit exponential
        return math.log(lam[0]) + 0.5 * _LOG2 - _EULER / 2.0

    def _omega_points(self, lam):
        return [lam[0] * math.sqrt(2.0)]

    def _sample(self, lam, n, rng):
        return lam[0] * np.sqrt(-2.0 * np.log1p(-rng.random(n)))


class Bernoulli(UnivariateFamily):
    """Bernoulli on {0, 1}; theta is the logit and the induced mean follows it."""

    family_id = "bernoulli"
    order = 1
    layout = ("s",)
    support = Support("binary")
    is_discrete = True
    has_entropy = False

    def _validate_source(self, blocks):
        _require(0 < blocks[0] < 1, "bernoulli: success probability must be in (0, 1)")

    def _validate_natural(self, blocks):
        _require(np.isfinite(blocks[0]), "bernoulli: natural parameter must be finite",
                 NaturalDomainViolation)

    def _theta(self, lam):
        p = lam[0]
        return (np.log(p) - np.log1p(-p),)

    def _lambda(self, theta):
        t = theta[0]
        with np.errstate(over="ignore"):
            return (np.where(t >= 0, 1.0 / (1.0 + np.exp(-t)), np.exp(t) / (1.0 + np.exp(t))),)

    def natural_derivative(self, lam):
        p = float(lam.blocks[0])
        return 1.0 / (p * (1.0 - p))

    def _suff_stat(self, x):
        return (float(x),)

    def _carrier(self, x):
        return 0.0

    def _log_density(self, lam, x):
        p = lam[0]
        return x * np.log(p) + (1.0 - x) * np.log1p(-p)

    def in_support(self, x):
        return np.ndim(x) == 0 and float(x) in (0.0, 1.0)

    def default_omega(self):
        return 0

    def _moment(self, lam):
        return (lam[0],)

    def _carrier_expectation(self, lam):
        return 0.0

    def _sample(self, lam, n, rng):
        return (rng.random(n) < lam[0]).astype(float)


def gamma_marsaglia_tsang(rng: np.random.Generator, shape: float, n: int) -> np.ndarray:
    """Unit-scale gamma variates via the squeeze-on-cubed-normal rejection scheme."""
    if shape < 1.0:
        # boost: Gamma(a) = Gamma(a + 1) * U^(1/a)
        base = gamma_marsaglia_tsang(rng, shape + 1.0, n)
        return base * rng.random(n) ** (1.0 / shape)
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    out = np.empty(n)
    filled = 0
    while filled < n:
        m = max(16, int(1.2 * (n - filled)) + 1)
        z = rng.standard_normal(m)
        v = (1.0 + c * z) ** 3
        u = rng.random(m)
        with np.errstate(invalid="ignore", divide="ignore"):
            ok = (v > 0) & (np.log(u) < 0.5 * z * z + d - d * v + d * np.log(np.where(v > 0, v, 1.0)))
        accepted = d * v[ok]
        take = min(accepted.size, n - filled)
        out[filled:filled + take] = accepted[:take]
        filled += take
    return out


__all__ = [
    "Bernoulli",
    "Exponential",
    "Laplace",
    "Poisson",
    "Rayleigh",
    "Weibull",
    "gamma_marsaglia_tsang",
]
