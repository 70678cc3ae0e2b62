"""Closed-form statistical (dis)similarities on exponential families.

Bhattacharyya, Hellinger, alpha, Chernoff, Kullback-Leibler, Jeffreys,
Jensen-Shannon (mixtures) and Cauchy-Schwarz (Gaussians) computed from the
published densities and source/natural parameter conversions alone, with the
log-normalizer never evaluated, plus brute-force oracles (quadrature, exact
summation, seeded Monte Carlo) to verify every closed form.
"""

from .divergences import (
    ChernoffResult,
    DivergenceResult,
    Method,
    alpha_divergence,
    bhattacharyya_coefficient,
    bhattacharyya_distance,
    cauchy_schwarz_gaussian,
    chernoff_information,
    hellinger,
    jeffreys,
    jensen_shannon_mixture,
    kld,
    kld_entropy_moment,
    kld_limit,
    kld_logratio,
)
from .errors import (
    DegenerateSolution,
    InvalidAlpha,
    InvalidParameter,
    NaturalDomainViolation,
    NonConvergent,
    NotSPD,
    OutOfSupport,
    Unsupported,
)
from .family import ExponentialFamily, Support
from .families import catalog, family_ids, make_family, mixture_of
from .families.mixture import MixtureComponent, MixtureFamily
from .means import MeanRequest, matrix_harmonic_barycenter, qam, qam_taylor, resolve_mean
from .oracle import (
    DEFAULT_SEED,
    MonteCarloEstimate,
    OracleConfig,
    OracleEstimate,
    entropy_monte_carlo,
    entropy_monte_carlo_family,
    integral_I,
    kld_monte_carlo,
    kld_quadrature,
    sample,
)
from .params import Param, ParamKind, SuffStat

__all__ = [
    "ChernoffResult",
    "DEFAULT_SEED",
    "DegenerateSolution",
    "DivergenceResult",
    "ExponentialFamily",
    "InvalidAlpha",
    "InvalidParameter",
    "MeanRequest",
    "Method",
    "MixtureComponent",
    "MixtureFamily",
    "MonteCarloEstimate",
    "NaturalDomainViolation",
    "NonConvergent",
    "NotSPD",
    "OracleConfig",
    "OracleEstimate",
    "OutOfSupport",
    "Param",
    "ParamKind",
    "SuffStat",
    "Support",
    "Unsupported",
    "alpha_divergence",
    "bhattacharyya_coefficient",
    "bhattacharyya_distance",
    "catalog",
    "cauchy_schwarz_gaussian",
    "chernoff_information",
    "entropy_monte_carlo",
    "entropy_monte_carlo_family",
    "family_ids",
    "hellinger",
    "integral_I",
    "jeffreys",
    "jensen_shannon_mixture",
    "kld",
    "kld_entropy_moment",
    "kld_limit",
    "kld_logratio",
    "kld_monte_carlo",
    "kld_quadrature",
    "make_family",
    "matrix_harmonic_barycenter",
    "mixture_of",
    "qam",
    "qam_taylor",
    "resolve_mean",
    "sample",
]
