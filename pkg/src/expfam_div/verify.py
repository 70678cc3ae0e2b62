"""Runnable invariant suite behind the command-line ``verify`` subcommand.

Each check exercises one contract of the library on seeded random inputs:
conversion round trips, reference-point independence, normalization against
the brute-force oracle, moment/entropy consistency, the published mid-point
means, coefficient/oracle agreement and cross-method KL equality.  Checks are
deterministic for a given seed.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np

from . import reference
from .divergences import (
    bhattacharyya_coefficient,
    bhattacharyya_distance,
    chernoff_information,
    kld_entropy_moment,
    kld_logratio,
)
from .errors import DegenerateSolution, Unsupported
from .family import ExponentialFamily
from .families import (
    Bernoulli,
    Beta,
    CenteredGaussian,
    Dirichlet,
    Exponential,
    FixedCovGaussian,
    Gamma,
    Gaussian1D,
    InverseGaussian,
    Laplace,
    MultivariateGaussian,
    Poisson,
    Rayleigh,
    Weibull,
    Wishart,
    catalog,
)
from .means import qam
from .oracle import (
    DEFAULT_SEED,
    OracleConfig,
    entropy_monte_carlo_family,
    integral_I,
    kld_quadrature,
    sample,
)
from .params import Param, block_dot, block_flatten, block_mix


@dataclass(frozen=True)
class CheckResult:
    family: str
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        detail = f" ({self.detail})" if self.detail else ""
        return f"[{status}] {self.family}: {self.name}{detail}"


# ---------------------------------------------------------------------------
# seeded random inputs per family
# ---------------------------------------------------------------------------

def random_spd(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    base = rng.standard_normal((dim, dim))
    mat = base @ base.T / dim + (0.3 + rng.random()) * np.eye(dim)
    return scale * 0.5 * (mat + mat.T)


def random_source(fam: ExponentialFamily, rng: np.random.Generator) -> Param:
    """A random in-domain source parameter, moderate enough for quadrature."""
    if isinstance(fam, (Exponential, Laplace, Weibull, Rayleigh)):
        return fam.source(rng.uniform(0.3, 3.5))
    if isinstance(fam, Poisson):
        return fam.source(rng.uniform(0.3, 8.0))
    if isinstance(fam, Bernoulli):
        return fam.source(rng.uniform(0.05, 0.95))
    if isinstance(fam, Gaussian1D):
        return fam.source(rng.uniform(-2.0, 2.0), rng.uniform(0.3, 3.0))
    if isinstance(fam, FixedCovGaussian):
        return fam.source(rng.uniform(-2.0, 2.0, size=fam.sample_dim))
    if isinstance(fam, Gamma):
        return fam.source(rng.uniform(0.4, 5.0), rng.uniform(0.3, 4.0))
    if isinstance(fam, Beta):
        return fam.source(rng.uniform(0.4, 5.0), rng.uniform(0.4, 5.0))
    if isinstance(fam, Dirichlet):
        return fam.source(rng.uniform(0.4, 5.0, size=fam.sample_dim))
    if isinstance(fam, MultivariateGaussian):
        return fam.source(rng.uniform(-2.0, 2.0, size=fam.sample_dim),
                          random_spd(rng, fam.sample_dim))
    if isinstance(fam, CenteredGaussian):
        return fam.source(random_spd(rng, fam.sample_dim))
    if isinstance(fam, InverseGaussian):
        return fam.source(rng.uniform(0.3, 3.0), rng.uniform(0.3, 4.0))
    if isinstance(fam, Wishart):
        return fam.source(fam.sample_dim + rng.uniform(0.5, 6.0),
                          random_spd(rng, fam.sample_dim))
    raise Unsupported(f"no random source generator for {fam.family_id}")


def omega_set(fam: ExponentialFamily, rng: np.random.Generator, count: int = 5) -> list:
    """Distinct in-support points (the binary support only has two)."""
    if isinstance(fam, Bernoulli):
        return [0.0, 1.0]
    if isinstance(fam, Poisson):
        return [float(k) for k in range(count)]
    ref = random_source(fam, rng)
    points = fam.sample(ref, count, rng)
    return [points[i] for i in range(count)]


def _reference_mean(fam: ExponentialFamily, a: Param, b: Param):
    """Published mid-point mean as source blocks, or None when not wired."""
    if isinstance(fam, Exponential):
        return (reference.mean_arithmetic(a[0], b[0]),)
    if isinstance(fam, Poisson):
        return (reference.mean_geometric(a[0], b[0]),)
    if isinstance(fam, Laplace):
        return (reference.mean_harmonic(a[0], b[0]),)
    if isinstance(fam, Weibull):
        return (reference.mean_power(-fam.shape, a[0], b[0]),)
    if isinstance(fam, Bernoulli):
        return (reference.mean_bernoulli(a[0], b[0]),)
    if isinstance(fam, Gaussian1D):
        return reference.mean_gaussian1d(a.blocks, b.blocks)
    if isinstance(fam, (Gamma, Beta, Dirichlet)):
        return tuple(reference.mean_arithmetic(x, y) for x, y in zip(a.blocks, b.blocks))
    if isinstance(fam, FixedCovGaussian):
        return (reference.mean_arithmetic(a[0], b[0]),)
    if isinstance(fam, InverseGaussian):
        return reference.mean_inverse_gaussian(a.blocks, b.blocks)
    if isinstance(fam, MultivariateGaussian):
        return reference.mean_mvn(a[0], a[1], b[0], b[1])
    if isinstance(fam, Wishart):
        return reference.mean_wishart(a[0], a[1], b[0], b[1])
    if isinstance(fam, CenteredGaussian):
        mu, cov = reference.mean_mvn(np.zeros(fam.sample_dim), a[0],
                                     np.zeros(fam.sample_dim), b[0])
        return (cov,)
    return None


def _rel_err(value, target) -> float:
    arr_v = block_flatten([value]) if np.ndim(value) else np.array([value])
    arr_t = block_flatten([target]) if np.ndim(target) else np.array([target])
    return float(np.max(np.abs(arr_v - arr_t) / (1.0 + np.abs(arr_t))))


# ---------------------------------------------------------------------------
# individual checks
# ---------------------------------------------------------------------------

def check_round_trip(fam, rng, n=50) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        lam = random_source(fam, rng)
        theta = fam.to_natural(lam)
        back = fam.to_source(theta)
        for orig, rec in zip(lam.blocks, back.blocks):
            err = np.max(np.abs(np.asarray(rec) - np.asarray(orig))
                         / (1.0 + np.abs(np.asarray(orig))))
            worst = max(worst, float(err))
        theta_back = fam.to_natural(back)
        for orig, rec in zip(theta.blocks, theta_back.blocks):
            err = np.max(np.abs(np.asarray(rec) - np.asarray(orig))
                         / (1.0 + np.abs(np.asarray(orig))))
            worst = max(worst, float(err))
    return CheckResult(fam.family_id, "conversion round trip", worst <= 1e-12,
                       f"max rel err {worst:.3g}")


def check_cumulant_omega_independent(fam, rng, n=8) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        lam = random_source(fam, rng)
        points = omega_set(fam, rng, 5)
        values = [fam.implicit_cumulant(lam, w) for w in points]
        spread = (max(values) - min(values)) / (1.0 + abs(values[0]))
        worst = max(worst, spread)
    return CheckResult(fam.family_id, "implicit cumulant independent of omega",
                       worst <= 1e-10, f"max rel spread {worst:.3g}")


def check_normalization(fam, rng, cfg) -> CheckResult:
    lam = random_source(fam, rng)
    other = random_source(fam, rng)
    est = integral_I(fam, lam, other, 1.0, 0.0, cfg)
    if est.method == "montecarlo":
        ok = abs(est.value - 1.0) <= 3.0 * max(est.error, 1e-12)
        detail = f"MC {est.value:.6f} +- {est.error:.2g}"
    else:
        tol = 1e-10 if fam.is_discrete else 1e-8
        ok = abs(est.value - 1.0) <= tol
        detail = f"{est.method} {est.value:.12f}"
    return CheckResult(fam.family_id, "density normalizes to 1", ok, detail)


def check_moment_mc(fam, rng, cfg) -> CheckResult:
    if not (fam.has_moment and fam.has_sampler):
        return CheckResult(fam.family_id, "moment matches sampled t(x)", True, "skipped")
    lam = random_source(fam, rng)
    n = max(cfg.mc_samples, 10_000)
    draws = sample(fam, lam, n, cfg.seed)
    stats = np.stack([block_flatten(fam._suff_stat(x)) for x in np.asarray(draws)])
    mean = stats.mean(axis=0)
    se = stats.std(axis=0, ddof=1) / math.sqrt(n)
    target = fam.moment(lam).flatten()
    z = np.max(np.abs(mean - target) / np.maximum(se, 1e-14))
    return CheckResult(fam.family_id, "moment matches sampled t(x)", bool(z <= 3.0),
                       f"max |z| = {z:.2f}")


def check_entropy_mc(fam, rng, cfg) -> CheckResult:
    if not (fam.has_entropy and fam.has_sampler):
        return CheckResult(fam.family_id, "entropy matches Monte Carlo", True, "skipped")
    lam = random_source(fam, rng)
    est = entropy_monte_carlo_family(fam, lam, cfg)
    z = abs(est.estimate - fam.entropy(lam)) / max(est.std_error, 1e-14)
    return CheckResult(fam.family_id, "entropy matches Monte Carlo", bool(z <= 3.0),
                       f"|z| = {z:.2f}")


def check_published_mean(fam, rng, n=100) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        a = random_source(fam, rng)
        b = random_source(fam, rng)
        expected = _reference_mean(fam, a, b)
        if expected is None:
            return CheckResult(fam.family_id, "published mid-point mean", True, "skipped")
        got = qam(fam, a, b, 0.5)
        for g, e in zip(got.blocks, expected):
            worst = max(worst, _rel_err(np.asarray(g), np.asarray(e)))
    return CheckResult(fam.family_id, "published mid-point mean", worst <= 1e-10,
                       f"max rel err {worst:.3g}")


def check_unnormalized_invariance(fam, rng, n=20) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        a = random_source(fam, rng)
        b = random_source(fam, rng)
        alpha = rng.uniform(0.05, 0.95)
        w = omega_set(fam, rng, 1)[0]
        mean = qam(fam, a, b, alpha)
        gap = (fam.log_unnormalized_density(mean, w)
               - alpha * fam.log_unnormalized_density(a, w)
               - (1.0 - alpha) * fam.log_unnormalized_density(b, w))
        worst = max(worst, abs(gap))
    return CheckResult(fam.family_id, "unnormalized density invariance", worst <= 1e-10,
                       f"max |gap| {worst:.3g}")


def check_rho_omega_invariance(fam, rng, n=10) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        a = random_source(fam, rng)
        b = random_source(fam, rng)
        values = [bhattacharyya_coefficient(fam, a, b, 0.5, omega=w)
                  for w in omega_set(fam, rng, 5)]
        spread = (max(values) - min(values)) / values[0]
        worst = max(worst, spread)
    return CheckResult(fam.family_id, "coefficient independent of omega", worst <= 1e-9,
                       f"max rel spread {worst:.3g}")


def check_rho_vs_oracle(fam, rng, cfg, n_pairs=5) -> CheckResult:
    worst = ""
    ok = True
    for _ in range(n_pairs):
        a = random_source(fam, rng)
        b = random_source(fam, rng)
        for alpha in (0.1, 0.5, 0.9):
            rho = bhattacharyya_coefficient(fam, a, b, alpha)
            est = integral_I(fam, a, b, alpha, 1.0 - alpha, cfg)
            if est.method == "montecarlo":
                good = abs(rho - est.value) <= 3.0 * max(est.error, 1e-12)
            elif est.method == "summation":
                good = abs(rho - est.value) <= 1e-10
            else:
                good = abs(rho - est.value) <= 1e-6
            if not good:
                ok = False
                worst = f"alpha={alpha}: closed {rho:.9g} vs oracle {est.value:.9g}"
    return CheckResult(fam.family_id, "coefficient matches integral oracle", ok, worst)


def check_kl_methods(fam, rng, cfg, n_pairs=8) -> CheckResult:
    has_ratio = fam.has_omega_solver
    has_em = fam.has_entropy and fam.has_moment and fam.has_carrier_expectation
    if not (has_ratio or has_em):
        return CheckResult(fam.family_id, "KL cross-method agreement", True, "skipped")
    worst = 0.0
    checked_oracle = False
    ok = True
    detail = ""
    for i in range(n_pairs):
        a = random_source(fam, rng)
        b = random_source(fam, rng)
        values = {}
        if has_ratio:
            try:
                values["logratio"] = kld_logratio(fam, a, b).value
            except DegenerateSolution:
                pass
        if has_em:
            values["entropy_moment"] = kld_entropy_moment(fam, a, b).value
        if len(values) == 2:
            gap = abs(values["logratio"] - values["entropy_moment"])
            scale = 1.0 + abs(values["entropy_moment"])
            worst = max(worst, gap / scale)
            if gap > 1e-9 * scale:
                ok = False
                detail = f"logratio vs entropy_moment gap {gap:.3g}"
        if i < 2 and values:
            target = next(iter(values.values()))
            try:
                est = kld_quadrature(fam, a, b, cfg)
            except Unsupported:
                continue
            checked_oracle = True
            if abs(est.value - target) > 1e-6 * (1.0 + abs(target)):
                ok = False
                detail = f"oracle {est.value:.9g} vs closed {target:.9g}"
    note = detail or (f"max rel gap {worst:.3g}" + ("" if checked_oracle else "; no quadrature"))
    return CheckResult(fam.family_id, "KL cross-method agreement", ok, note)


def check_omega_points(fam, rng, n=10) -> CheckResult:
    if not fam.has_omega_solver:
        return CheckResult(fam.family_id, "omega points match the moment", True, "skipped")
    worst = 0.0
    for _ in range(n):
        lam = random_source(fam, rng)
        try:
            points = fam.omega_points(lam)
        except DegenerateSolution:
            continue
        if not all(fam.in_support(w) for w in points):
            return CheckResult(fam.family_id, "omega points match the moment", False,
                               "point escaped the support")
        stats = np.stack([block_flatten(fam._suff_stat(w)) for w in points])
        gap = np.max(np.abs(stats.mean(axis=0) - fam.moment(lam).flatten()))
        worst = max(worst, float(gap))
    return CheckResult(fam.family_id, "omega points match the moment", worst <= 1e-10,
                       f"max abs gap {worst:.3g}")


def check_natural_linearity(fam, rng, n=20) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        a = random_source(fam, rng)
        b = random_source(fam, rng)
        alpha = rng.uniform(0.0, 1.0)
        mixed = block_mix(alpha, fam.to_natural(a).blocks, 1.0 - alpha,
                          fam.to_natural(b).blocks)
        mean_theta = fam.to_natural(qam(fam, a, b, alpha))
        for g, e in zip(mean_theta.blocks, mixed):
            worst = max(worst, _rel_err(np.asarray(g), np.asarray(e)))
    return CheckResult(fam.family_id, "mean is linear in natural coordinates",
                       worst <= 1e-12, f"max rel err {worst:.3g}")


def check_chernoff(fam, rng, n=3) -> CheckResult:
    ok = True
    detail = ""
    for _ in range(n):
        a = random_source(fam, rng)
        b = random_source(fam, rng)
        value, alpha_star = chernoff_information(fam, a, b)
        base = bhattacharyya_distance(fam, a, b, 0.5)
        if value < base - 1e-12 or not 0.0 < alpha_star < 1.0:
            ok = False
            detail = f"value {value:.6g} below midpoint {base:.6g}"
    return CheckResult(fam.family_id, "Chernoff dominates the midpoint", ok, detail)


# ---------------------------------------------------------------------------
# driver
# ---------------------------------------------------------------------------

def verify_family(fam: ExponentialFamily, seed: int = DEFAULT_SEED) -> list:
    # independent stream per family so draws in one suite do not shift another
    entropy = zlib.crc32(fam.family_id.encode())
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, entropy])))
    cfg = OracleConfig(abs_tol=1e-10, rel_tol=1e-10, mc_samples=60_000,
                       seed=seed ^ entropy)
    return [
        check_round_trip(fam, rng),
        check_cumulant_omega_independent(fam, rng),
        check_normalization(fam, rng, cfg),
        check_moment_mc(fam, rng, cfg),
        check_entropy_mc(fam, rng, cfg),
        check_published_mean(fam, rng),
        check_unnormalized_invariance(fam, rng),
        check_rho_omega_invariance(fam, rng),
        check_rho_vs_oracle(fam, rng, cfg),
        check_kl_methods(fam, rng, cfg),
        check_omega_points(fam, rng),
        check_natural_linearity(fam, rng),
        check_chernoff(fam, rng),
    ]


def run_verification(family_ids=None, seed: int = DEFAULT_SEED) -> list:
    results = []
    for fam in catalog():
        if family_ids and fam.family_id not in family_ids:
            continue
        results.extend(verify_family(fam, seed))
    return results
