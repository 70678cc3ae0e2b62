"""Cumulant-free (dis)similarities between densities of one exponential family.

Everything here is built from three ingredients only: the published density
p(x; lam), the source/natural conversions, and per-family moment/entropy
formulas.  The log-normalizer is never evaluated.  The central identity is

    D_B_alpha = log p(w; qam(lam1, lam2, alpha))
                - alpha log p(w; lam1) - (1 - alpha) log p(w; lam2)

for any support point w; coefficient work happens in log space and is
exponentiated last.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from .errors import DegenerateSolution, InvalidAlpha, OutOfSupport, Unsupported
from .family import ExponentialFamily, spd_inverse, spd_logdet
from .families.mixture import MixtureFamily
from .means import qam
from .oracle import OracleConfig, entropy_monte_carlo
from .params import Param, block_dot


class Method(enum.Enum):
    CLOSED_FORM = "ClosedForm"
    LIMIT = "Limit"
    ENTROPY_MOMENT = "EntropyMoment"
    LOG_RATIO = "LogRatio"
    MONTE_CARLO = "MonteCarlo"
    QUADRATURE = "Quadrature"


@dataclass(frozen=True)
class DivergenceResult:
    value: float
    method: Method
    alpha_used: Optional[float] = None
    omega_used: Optional[tuple] = None
    residual: Optional[float] = None


class ChernoffResult(NamedTuple):
    value: float
    alpha_star: float


def _resolve_omega(fam: ExponentialFamily, omega):
    if omega is None:
        return fam.default_omega()
    if not fam.in_support(omega):
        raise OutOfSupport(f"{fam.family_id}: omega {omega!r} not in support")
    return omega


def _log_rho(fam: ExponentialFamily, lam1: Param, lam2: Param, alpha: float, omega) -> float:
    """log rho_alpha at a support point; nonpositive up to rounding."""
    mean = qam(fam, lam1, lam2, alpha)
    l1 = fam.log_density(lam1, omega)
    l2 = fam.log_density(lam2, omega)
    lbar = fam.log_density(mean, omega)
    distance = lbar - alpha * l1 - (1.0 - alpha) * l2
    return -max(0.0, distance)


def bhattacharyya_coefficient(fam: ExponentialFamily, lam1: Param, lam2: Param,
                              alpha: float = 0.5, omega=None) -> float:
    """Skewed coefficient rho_alpha in (0, 1]; independent of the omega choice."""
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(f"alpha must be in (0, 1), got {alpha}")
    return math.exp(_log_rho(fam, lam1, lam2, alpha, _resolve_omega(fam, omega)))


def bhattacharyya_distance(fam: ExponentialFamily, lam1: Param, lam2: Param,
                           alpha: float = 0.5, omega=None) -> float:
    """-log rho_alpha, computed fully in log space."""
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(f"alpha must be in (0, 1), got {alpha}")
    return -_log_rho(fam, lam1, lam2, alpha, _resolve_omega(fam, omega))


def hellinger(fam: ExponentialFamily, lam1: Param, lam2: Param, omega=None) -> float:
    """sqrt(1 - rho_1/2); a metric, symmetric in its arguments."""
    rho = math.exp(_log_rho(fam, lam1, lam2, 0.5, _resolve_omega(fam, omega)))
    return math.sqrt(max(0.0, 1.0 - rho))


def alpha_divergence(fam: ExponentialFamily, lam1: Param, lam2: Param, alpha: float) -> float:
    """(1 - rho_alpha) / (alpha (1 - alpha)); KL endpoints at alpha in {0, 1}.

    Outside [0, 1] the skewed mean extrapolates and raises
    NaturalDomainViolation when the mixed natural parameter leaves the domain.
    """
    if alpha == 1.0:
        return kld(fam, lam1, lam2).value
    if alpha == 0.0:
        return kld(fam, lam2, lam1).value
    log_rho = _log_rho(fam, lam1, lam2, alpha, fam.default_omega())
    return -math.expm1(log_rho) / (alpha * (1.0 - alpha))


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def chernoff_information(fam: ExponentialFamily, lam1: Param, lam2: Param,
                         tol: float = 1e-8, max_iter: int = 200) -> ChernoffResult:
    """Maximal skewed distance over alpha in (0, 1), by golden-section search.

    The objective is concave in alpha, so golden section on [1e-6, 1 - 1e-6]
    converges; the midpoint value is reported whenever it edges out the
    located maximizer (guaranteeing value >= the alpha = 1/2 distance).
    """
    omega = fam.default_omega()

    def objective(alpha):
        return -_log_rho(fam, lam1, lam2, alpha, omega)

    lo, hi = 1e-6, 1.0 - 1e-6
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = objective(x1), objective(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = objective(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = objective(x2)
    alpha_star = 0.5 * (lo + hi)
    value = objective(alpha_star)
    midpoint = objective(0.5)
    if midpoint >= value:
        return ChernoffResult(midpoint, 0.5)
    return ChernoffResult(value, alpha_star)


# ---------------------------------------------------------------------------
# Kullback-Leibler routes
# ---------------------------------------------------------------------------

def kld_limit(fam: ExponentialFamily, lam1: Param, lam2: Param,
              alpha_step: float = 1e-3, omega=None) -> DivergenceResult:
    """KL as the small-alpha limit of the skewed distance, Richardson-extrapolated.

    D(alpha) = log(p(w;lam1)/p(w;lam2))
               + log(p(w; qam(lam2, lam1, alpha)) / p(w;lam1)) / alpha
    has an O(alpha) bias; combining D(alpha) and D(alpha/2) cancels it.
    """
    if not 0.0 < alpha_step <= 0.1:
        raise InvalidAlpha(f"alpha_step must be in (0, 0.1], got {alpha_step}")
    w = _resolve_omega(fam, omega)
    l1 = fam.log_density(lam1, w)
    l2 = fam.log_density(lam2, w)

    def estimate(alpha):
        mean = qam(fam, lam2, lam1, alpha)
        return (l1 - l2) + (fam.log_density(mean, w) - l1) / alpha

    coarse = estimate(alpha_step)
    fine = estimate(0.5 * alpha_step)
    return DivergenceResult(
        value=2.0 * fine - coarse,
        method=Method.LIMIT,
        alpha_used=alpha_step,
        omega_used=(w,),
        residual=abs(coarse - fine),
    )


def kld_entropy_moment(fam: ExponentialFamily, lam1: Param, lam2: Param) -> DivergenceResult:
    """KL from off-the-shelf entropy and moment formulas.

    Writes the divergence as F(theta2) - h(p1) - E1[k(x)] - theta2 . E1[t(x)]
    where F(theta2) is recovered from the density at the family's reference
    point; the t(w) and k(w) pieces inside that recovery are exactly what
    makes the expression independent of the reference point.
    """
    if not (fam.has_entropy and fam.has_moment and fam.has_carrier_expectation):
        raise Unsupported(f"{fam.family_id}: entropy/moment route needs entropy, "
                          "moment and carrier expectations")
    w = fam.default_omega()
    theta2 = fam.to_natural(lam2)
    cumulant2 = fam.implicit_cumulant(lam2, w)
    eta1 = fam.moment(lam1)
    value = (cumulant2 - fam.entropy(lam1) - fam.carrier_expectation(lam1)
             - block_dot(theta2.blocks, eta1.blocks))
    return DivergenceResult(value=value, method=Method.ENTROPY_MOMENT, omega_used=(w,))


def kld_logratio(fam: ExponentialFamily, lam1: Param, lam2: Param) -> DivergenceResult:
    """Exact KL as an averaged log density ratio over moment-matched points.

    The points come from the family's omega solver:  their sufficient
    statistics average to E_1[t(x)], which zeroes the correction term and
    leaves (1/s) sum log(p1(w_i)/p2(w_i)) equal to the divergence up to
    floating point, with no approximation.
    """
    points = fam.omega_points(lam1)
    ratios = [fam.log_density(lam1, w) - fam.log_density(lam2, w) for w in points]
    return DivergenceResult(
        value=float(np.mean(ratios)),
        method=Method.LOG_RATIO,
        omega_used=tuple(points),
    )


def kld(fam: ExponentialFamily, lam1: Param, lam2: Param,
        method: str = "auto", alpha_step: float = 1e-3) -> DivergenceResult:
    """KL divergence D[p_lam1 : p_lam2] with method resolution.

    "auto" prefers the exact log-ratio route, then the entropy/moment route,
    then the Richardson-extrapolated limit.
    """
    if method == "logratio":
        return kld_logratio(fam, lam1, lam2)
    if method == "entropy_moment":
        return kld_entropy_moment(fam, lam1, lam2)
    if method == "limit":
        return kld_limit(fam, lam1, lam2, alpha_step)
    if method != "auto":
        raise ValueError(f"unknown KL method {method!r}")
    if fam.has_omega_solver:
        try:
            return kld_logratio(fam, lam1, lam2)
        except DegenerateSolution:
            pass
    if fam.has_entropy and fam.has_moment and fam.has_carrier_expectation:
        return kld_entropy_moment(fam, lam1, lam2)
    return kld_limit(fam, lam1, lam2, alpha_step)


def jeffreys(fam: ExponentialFamily, lam1: Param, lam2: Param) -> float:
    """(theta2 - theta1) . (eta2 - eta1); symmetric and nonnegative."""
    if not fam.has_moment:
        raise Unsupported(f"{fam.family_id}: moment parameter required")
    theta1 = fam.to_natural(lam1)
    theta2 = fam.to_natural(lam2)
    eta1 = fam.moment(lam1)
    eta2 = fam.moment(lam2)
    diff_theta = tuple(np.asarray(b) - np.asarray(a)
                       for a, b in zip(theta1.blocks, theta2.blocks))
    diff_eta = tuple(np.asarray(b) - np.asarray(a)
                     for a, b in zip(eta1.blocks, eta2.blocks))
    return max(0.0, block_dot(diff_theta, diff_eta))


# ---------------------------------------------------------------------------
# Jensen-Shannon for mixture families, Cauchy-Schwarz for Gaussians
# ---------------------------------------------------------------------------

LOG2 = math.log(2.0)


def jensen_shannon_mixture(mix: MixtureFamily, w1, w2, cfg: OracleConfig) -> DivergenceResult:
    """JSD between two members of a mixture family via Monte-Carlo entropies.

    h(m_mid) - (h(m_w1) + h(m_w2)) / 2 with independent seeded streams per
    entropy; the residual carries the combined standard error and the value
    is clipped to the theoretical range [0, log 2].
    """
    w1 = mix.validate_weights(w1)
    w2 = mix.validate_weights(w2)
    mid = 0.5 * (w1 + w2)
    seeds = np.random.SeedSequence(cfg.seed).generate_state(3)
    estimates = []
    for weights, seed in zip((mid, w1, w2), seeds):
        sub_cfg = replace(cfg, seed=int(seed))
        estimates.append(entropy_monte_carlo(
            lambda xs, _w=weights: mix.log_density_batch(_w, xs),
            lambda n, rng, _w=weights: mix.sample(_w, n, rng),
            sub_cfg))
    h_mid, h_1, h_2 = estimates
    raw = h_mid.estimate - 0.5 * (h_1.estimate + h_2.estimate)
    se = math.sqrt(h_mid.std_error ** 2 + 0.25 * h_1.std_error ** 2
                   + 0.25 * h_2.std_error ** 2)
    return DivergenceResult(
        value=min(max(raw, 0.0), LOG2),
        method=Method.MONTE_CARLO,
        residual=se,
    )


def _as_gaussian(lam: Param):
    if lam.family_id == "gaussian1d":
        mu, var = lam.blocks
        return np.array([mu]), np.array([[var]])
    if lam.family_id.startswith("mvn"):
        mu, cov = lam.blocks
        return np.asarray(mu, dtype=float), np.asarray(cov, dtype=float)
    raise Unsupported(f"cauchy_schwarz_gaussian expects gaussian1d or mvn parameters, "
                      f"got {lam.family_id!r}")


def cauchy_schwarz_gaussian(lam1: Param, lam2: Param) -> float:
    """Closed-form Cauchy-Schwarz divergence between two Gaussians.

    -log( int p q / sqrt(int p^2 int q^2) ); projective, zero iff the two
    parameter pairs coincide.
    """
    mu1, cov1 = _as_gaussian(lam1)
    mu2, cov2 = _as_gaussian(lam2)
    d = mu1.shape[0]
    if mu2.shape[0] != d:
        raise Unsupported("cauchy_schwarz_gaussian: dimension mismatch")
    prec1 = spd_inverse(cov1)
    prec2 = spd_inverse(cov2)
    prec_sum = prec1 + prec2
    pooled = spd_inverse(prec_sum)
    log_term = 0.5 * (-d * LOG2 + 0.5 * (spd_logdet(cov1) + spd_logdet(cov2))
                      + spd_logdet(prec_sum))
    h1 = prec1 @ mu1
    h2 = prec2 @ mu2
    quad = 0.5 * (mu1 @ h1) + 0.5 * (mu2 @ h2) - 0.5 * ((h1 + h2) @ pooled @ (h1 + h2))
    return max(0.0, log_term + quad)
