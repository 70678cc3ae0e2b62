"""Mixture families: fixed component densities with a weight-simplex parameter.

A mixture family is closed under mid-point mixing of its weight vectors,
which is what makes the Jensen-Shannon divergence computable from entropies
alone.  Components must be linearly independent densities for the weights to
be identifiable; that is the caller's responsibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import logsumexp

from ..errors import InvalidParameter
from ..family import ExponentialFamily
from ..params import Param


@dataclass(frozen=True)
class MixtureComponent:
    """One fixed component: vectorized log density plus a sampler."""

    log_density_batch: Callable[[np.ndarray], np.ndarray]
    sample: Callable[[int, np.random.Generator], np.ndarray]


@dataclass(frozen=True)
class MixtureFamily:
    components: tuple

    def __post_init__(self):
        if len(self.components) < 2:
            raise InvalidParameter("mixture: need at least two components")

    @property
    def k(self) -> int:
        return len(self.components)

    def validate_weights(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        if w.shape != (self.k,):
            raise InvalidParameter(f"mixture: weight vector must have length {self.k}")
        if np.any(w < 0) or abs(float(np.sum(w)) - 1.0) > 1e-9:
            raise InvalidParameter("mixture: weights must be nonnegative and sum to 1")
        return w

    def log_density_batch(self, w, xs) -> np.ndarray:
        w = self.validate_weights(w)
        logs = np.stack([c.log_density_batch(xs) for c in self.components], axis=0)
        with np.errstate(divide="ignore"):
            logw = np.where(w > 0, np.log(np.where(w > 0, w, 1.0)), -np.inf)
        return logsumexp(logs + logw[:, None], axis=0)

    def sample(self, w, n: int, rng: np.random.Generator) -> np.ndarray:
        w = self.validate_weights(w)
        counts = rng.multinomial(n, w)
        parts = [c.sample(int(m), rng) for c, m in zip(self.components, counts) if m > 0]
        return np.concatenate(parts, axis=0)


def mixture_of(fam: ExponentialFamily, members: Sequence[Param]) -> MixtureFamily:
    """Mixture whose components are fixed members of one exponential family."""
    comps = []
    for lam in members:
        comps.append(MixtureComponent(
            log_density_batch=lambda xs, _l=lam: fam.log_density_batch(_l, np.asarray(xs)),
            sample=lambda n, rng, _l=lam: np.asarray(fam.sample(_l, n, rng)),
        ))
    return MixtureFamily(tuple(comps))
