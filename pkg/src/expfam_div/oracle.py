"""Brute-force ground truth: quadrature, exact truncated summation, seeded Monte Carlo.

Every closed-form (dis)similarity in :mod:`expfam_div.divergences` is checked
against one of these routes in the test suite.  The routes deliberately avoid
the quasi-arithmetic-mean machinery: quadrature and summation integrate the
published densities directly, and the Monte Carlo importance proposal is the
half/half arithmetic mixture of the two densities (bounded weights), not a
geometric interpolate, so the oracle stays independent of the code it checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import quad
from scipy.special import logsumexp

from .errors import InvalidParameter, NonConvergent, Unsupported
from .family import ExponentialFamily
from .params import Param

DEFAULT_SEED = 20260809
_LOG_HALF = math.log(0.5)


@dataclass(frozen=True)
class OracleConfig:
    """Quadrature / summation / Monte-Carlo settings."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200
    mc_samples: int = 100_000
    seed: int = DEFAULT_SEED
    tail_mass_cutoff: float = 1e-14

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise InvalidParameter("oracle: tolerances must be > 0")
        if self.mc_samples < 1000:
            raise InvalidParameter("oracle: mc_samples must be >= 1000")
        if not 0 < self.tail_mass_cutoff <= 1e-12:
            raise InvalidParameter("oracle: tail_mass_cutoff must be in (0, 1e-12]")
        if self.max_subdivisions < 10:
            raise InvalidParameter("oracle: max_subdivisions must be >= 10")


class OracleEstimate(NamedTuple):
    value: float
    error: float
    method: str


class MonteCarloEstimate(NamedTuple):
    estimate: float
    std_error: float


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sample(fam: ExponentialFamily, lam: Param, n: int, seed: int):
    """n iid draws from p_lam, deterministic per seed."""
    return fam.sample(lam, n, _rng(seed))


# ---------------------------------------------------------------------------
# quadrature and summation backends
# ---------------------------------------------------------------------------

def _quad(integrand: Callable[[float], float], lo: float, hi: float,
          cfg: OracleConfig) -> OracleEstimate:
    value, abserr, info, *rest = quad(
        integrand, lo, hi, epsabs=cfg.abs_tol, epsrel=cfg.rel_tol,
        limit=cfg.max_subdivisions, full_output=True)
    if rest:  # QUADPACK attached a warning message
        tol = 10.0 * max(cfg.abs_tol, cfg.rel_tol * abs(value))
        if abserr > tol:
            raise NonConvergent(f"quadrature error {abserr:g} above tolerance {tol:g}: {rest[0]}")
    return OracleEstimate(float(value), float(abserr), "quadrature")


def _signed_lattice_sum(term: Callable[[np.ndarray], np.ndarray],
                        cfg: OracleConfig) -> OracleEstimate:
    """Sum term(k) over k = 0, 1, ... until a geometric tail bound is negligible.

    Valid for terms with log-concave decay (all registered discrete pmfs and
    their products/log-ratio weightings): once the successive |term| ratio r
    drops below 1 it keeps shrinking, so the remaining tail is bounded by
    |last| * r / (1 - r).
    """
    total = 0.0
    chunk = 64
    start = 0
    prev_abs_last = None
    while True:
        ks = np.arange(start, start + chunk, dtype=float)
        terms = np.asarray(term(ks), dtype=float)
        abs_terms = np.abs(terms)
        total += float(np.sum(terms))
        last = float(abs_terms[-1])
        second_last = float(abs_terms[-2])
        ratio = last / second_last if second_last > 0 else 0.0
        decreasing = prev_abs_last is not None and last <= prev_abs_last
        prev_abs_last = last
        if (decreasing or last == 0.0) and ratio < 0.5:
            tail = last * ratio / (1.0 - ratio) if ratio > 0 else 0.0
            if tail < cfg.tail_mass_cutoff * max(1.0, abs(total)):
                return OracleEstimate(total, tail, "summation")
        start += chunk
        if start > 5_000_000:
            raise NonConvergent("lattice summation did not converge")


def _lattice_sum(log_term: Callable[[np.ndarray], np.ndarray],
                 cfg: OracleConfig) -> OracleEstimate:
    """Nonnegative-term summation, with terms supplied in log space."""

    def term(ks):
        with np.errstate(over="ignore"):
            return np.exp(log_term(ks))

    return _signed_lattice_sum(term, cfg)


# ---------------------------------------------------------------------------
# the generic power-product integral
# ---------------------------------------------------------------------------

def _combine_logs(l1, l2, alpha: float, beta: float):
    out = None
    if alpha != 0.0:
        out = alpha * l1
    if beta != 0.0:
        out = beta * l2 if out is None else out + beta * l2
    if out is None:
        out = np.zeros_like(np.asarray(l1, dtype=float))
    return out


def integral_I(fam: ExponentialFamily, lam1: Param, lam2: Param,
               alpha: float, beta: float, cfg: OracleConfig) -> OracleEstimate:
    """Integral (or sum) of p(x; lam1)^alpha * p(x; lam2)^beta over the support.

    Continuous scalar-sample families use adaptive quadrature, discrete
    families exact summation with a certified tail bound, and multivariate
    families importance-sampled Monte Carlo from the half/half mixture of the
    two densities (the error field is then one standard error).
    """
    if fam.is_discrete:
        if fam.support.kind == "binary":
            pts = [0.0, 1.0]
            vals = [math.exp(_combine_logs(fam.log_density(lam1, p),
                                           fam.log_density(lam2, p), alpha, beta))
                    for p in pts]
            return OracleEstimate(float(sum(vals)), 0.0, "summation")

        def log_term(ks):
            return _combine_logs(fam.log_density_batch(lam1, ks),
                                 fam.log_density_batch(lam2, ks), alpha, beta)

        return _lattice_sum(log_term, cfg)

    interval = fam.quadrature_interval()
    if interval is not None:
        lo, hi, pack = interval

        def integrand(x):
            p = pack(x)
            return math.exp(_combine_logs(fam._log_density(lam1.blocks, p),
                                          fam._log_density(lam2.blocks, p), alpha, beta))

        return _quad(integrand, lo, hi, cfg)

    return _mc_power_integral(fam, lam1, lam2, alpha, beta, cfg)


def _mc_power_integral(fam, lam1, lam2, alpha, beta, cfg) -> OracleEstimate:
    if not fam.has_sampler:
        raise Unsupported(f"{fam.family_id}: Monte-Carlo oracle needs a sampler")
    rng = _rng(cfg.seed)
    m = cfg.mc_samples
    n1, n2 = rng.multinomial(m, [0.5, 0.5])
    xs = np.concatenate([np.asarray(fam.sample(lam1, int(n1), rng)),
                         np.asarray(fam.sample(lam2, int(n2), rng))], axis=0)
    l1 = fam.log_density_batch(lam1, xs)
    l2 = fam.log_density_batch(lam2, xs)
    log_mix = logsumexp(np.stack([l1, l2]), axis=0) + _LOG_HALF
    with np.errstate(over="ignore"):
        weights = np.exp(_combine_logs(l1, l2, alpha, beta) - log_mix)
    est = float(np.mean(weights))
    se = float(np.std(weights, ddof=1) / math.sqrt(m))
    return OracleEstimate(est, se, "montecarlo")


# ---------------------------------------------------------------------------
# KL and entropy routes
# ---------------------------------------------------------------------------

def kld_quadrature(fam: ExponentialFamily, lam1: Param, lam2: Param,
                   cfg: OracleConfig) -> OracleEstimate:
    """Direct integral/sum of p log(p/q); Unsupported for genuinely multivariate supports."""
    if fam.is_discrete:
        if fam.support.kind == "binary":
            total = 0.0
            for p in (0.0, 1.0):
                l1 = fam.log_density(lam1, p)
                l2 = fam.log_density(lam2, p)
                total += math.exp(l1) * (l1 - l2)
            return OracleEstimate(total, 0.0, "summation")

        def term(ks):
            l1 = fam.log_density_batch(lam1, ks)
            l2 = fam.log_density_batch(lam2, ks)
            return np.exp(l1) * (l1 - l2)

        return _signed_lattice_sum(term, cfg)

    interval = fam.quadrature_interval()
    if interval is None:
        raise Unsupported(f"{fam.family_id}: use kld_monte_carlo for multivariate supports")
    lo, hi, pack = interval

    def integrand(x):
        p = pack(x)
        l1 = float(fam._log_density(lam1.blocks, p))
        if l1 == -math.inf:
            return 0.0
        l2 = float(fam._log_density(lam2.blocks, p))
        return math.exp(l1) * (l1 - l2)

    return _quad(integrand, lo, hi, cfg)


def kld_monte_carlo(fam: ExponentialFamily, lam1: Param, lam2: Param,
                    cfg: OracleConfig) -> MonteCarloEstimate:
    """Extended-KL estimator (1/m) sum [log(p/q) + q(x_i) - p(x_i)], x_i ~ p.

    Nonnegative in expectation, so small divergences do not flip sign on
    average; deterministic for a given seed.
    """
    if not fam.has_sampler:
        raise Unsupported(f"{fam.family_id}: no sampler")
    xs = np.asarray(sample(fam, lam1, cfg.mc_samples, cfg.seed))
    l1 = fam.log_density_batch(lam1, xs)
    l2 = fam.log_density_batch(lam2, xs)
    terms = (l1 - l2) + np.exp(l2) - np.exp(l1)
    est = float(np.mean(terms))
    se = float(np.std(terms, ddof=1) / math.sqrt(cfg.mc_samples))
    return MonteCarloEstimate(est, se)


def entropy_monte_carlo(log_density: Callable[[np.ndarray], np.ndarray],
                        sampler: Callable[[int, np.random.Generator], np.ndarray],
                        cfg: OracleConfig) -> MonteCarloEstimate:
    """-(1/m) sum log p(x_i) with x_i ~ p; seeded and reproducible."""
    rng = _rng(cfg.seed)
    xs = np.asarray(sampler(cfg.mc_samples, rng))
    vals = -np.asarray(log_density(xs), dtype=float)
    est = float(np.mean(vals))
    se = float(np.std(vals, ddof=1) / math.sqrt(cfg.mc_samples))
    return MonteCarloEstimate(est, se)


def entropy_monte_carlo_family(fam: ExponentialFamily, lam: Param,
                               cfg: OracleConfig) -> MonteCarloEstimate:
    return entropy_monte_carlo(
        lambda xs: fam.log_density_batch(lam, xs),
        lambda n, rng: fam.sample(lam, n, rng),
        cfg,
    )
