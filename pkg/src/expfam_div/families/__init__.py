"""Concrete family catalog and resolution of family identifiers.

Identifiers are stable lowercase strings.  Families that carry a
construction-time constant embed it in the id ("weibull_k2", "mvn3",
"dirichlet2", ...).  :func:`make_family` also accepts the generic names
("weibull", "mvn", ...) together with keyword options.
"""

from __future__ import annotations

import re

import numpy as np

from ..errors import InvalidParameter
from ..family import ExponentialFamily
from .gamma_beta import Beta, Dirichlet, Gamma, InverseGaussian
from .gaussian import CenteredGaussian, FixedCovGaussian, Gaussian1D, MultivariateGaussian
from .mixture import MixtureComponent, MixtureFamily, mixture_of
from .univariate import Bernoulli, Exponential, Laplace, Poisson, Rayleigh, Weibull
from .wishart import Wishart

_SIMPLE = {
    "exponential": Exponential,
    "poisson": Poisson,
    "laplace": Laplace,
    "rayleigh": Rayleigh,
    "bernoulli": Bernoulli,
    "gaussian1d": Gaussian1D,
    "gamma": Gamma,
    "beta": Beta,
    "inverse_gaussian": InverseGaussian,
}

_DIMAL = {
    "mvn": MultivariateGaussian,
    "centered_mvn": CenteredGaussian,
    "dirichlet": Dirichlet,
    "wishart": Wishart,
}


def catalog() -> list:
    """All registered concrete families (representative instances)."""
    entries = [cls() for cls in _SIMPLE.values()]
    entries += [Weibull(k) for k in (1, 2, 3)]
    entries += [Dirichlet(2), Dirichlet(3)]
    entries += [MultivariateGaussian(d) for d in (1, 2, 3)]
    entries += [CenteredGaussian(2)]
    entries += [FixedCovGaussian(np.eye(2))]
    entries += [Wishart(2)]
    return entries


def family_ids() -> list:
    return [fam.family_id for fam in catalog()]


def make_family(family_id: str, **options) -> ExponentialFamily:
    """Resolve a family identifier (exact or generic) to a family instance.

    Generic forms take options: weibull(shape=...), mvn(dim=...),
    centered_mvn(dim=...), dirichlet(dim=...), wishart(dim=...),
    gaussian_fixed_cov(cov=... or dim=... for an identity covariance).
    """
    fid = family_id.strip().lower()
    if fid in _SIMPLE:
        return _SIMPLE[fid]()
    if fid == "weibull":
        if "shape" not in options:
            raise InvalidParameter("weibull: a 'shape' option is required")
        return Weibull(float(options["shape"]))
    match = re.fullmatch(r"weibull_k(\d+(?:\.\d+)?)", fid)
    if match:
        return Weibull(float(match.group(1)))
    if fid in _DIMAL:
        if "dim" not in options:
            raise InvalidParameter(f"{fid}: a 'dim' option is required")
        return _DIMAL[fid](int(options["dim"]))
    match = re.fullmatch(r"(mvn|centered_mvn|dirichlet|wishart)(\d+)", fid)
    if match:
        return _DIMAL[match.group(1)](int(match.group(2)))
    if fid == "gaussian_fixed_cov" or re.fullmatch(r"gaussian_fixed_cov(\d+)", fid):
        if "cov" in options:
            return FixedCovGaussian(np.asarray(options["cov"], dtype=float))
        match = re.fullmatch(r"gaussian_fixed_cov(\d+)", fid)
        if match:
            return FixedCovGaussian(np.eye(int(match.group(1))))
        if "dim" in options:
            return FixedCovGaussian(np.eye(int(options["dim"])))
        raise InvalidParameter("gaussian_fixed_cov: provide 'cov' or 'dim'")
    raise InvalidParameter(f"unknown family id {family_id!r}")


__all__ = [
    "Bernoulli",
    "Beta",
    "CenteredGaussian",
    "Dirichlet",
    "Exponential",
    "FixedCovGaussian",
    "Gamma",
    "Gaussian1D",
    "InverseGaussian",
    "Laplace",
    "MixtureComponent",
    "MixtureFamily",
    "MultivariateGaussian",
    "Poisson",
    "Rayleigh",
    "Weibull",
    "Wishart",
    "catalog",
    "family_ids",
    "make_family",
    "mixture_of",
]
