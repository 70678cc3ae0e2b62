"""Family-agnostic exponential-family abstractions.

An :class:`ExponentialFamily` instance doubles as the family descriptor: it
carries the identifier, the order (natural-parameter dimension), the sample
dimension, the support description and the capability flags, together with
the canonical factorization pieces

    log p(x; lam) = theta(lam) . t(x) - F(theta(lam)) + k(x).

The log-normalizer F is never implemented.  Every subclass supplies the
published density formula directly (``_log_density``) plus the conversion
functions theta(lam), lam(theta), the sufficient statistic t(x) and the
carrier k(x).  When a value of F is needed for diagnostics it is recovered
from the density at a support point omega:

    F(theta) = theta . t(omega) + k(omega) - log p(omega; lam(theta)),

which is independent of the choice of omega (tested, not assumed).

All operations are pure functions of immutable inputs; family instances are
immutable and safe to share across threads.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter, NaturalDomainViolation, NotSPD, OutOfSupport, Unsupported
from .params import Param, ParamKind, SuffStat, as_block, block_dot, symmetrize


@dataclass(frozen=True)
class Support:
    """Sample-space description.

    kind is one of "interval" (scalar samples), "integers" (0, 1, 2, ...),
    "binary" ({0, 1}), "euclidean" (R^dim vectors), "simplex" (open standard
    simplex, vectors of length dim summing to 1) or "spd" (dim x dim SPD
    matrices).
    """

    kind: str
    lower: float = -math.inf
    upper: float = math.inf
    lower_open: bool = False
    dim: int = 1

    def describe(self) -> str:
        if self.kind == "interval":
            lo = "(" if (self.lower_open or self.lower == -math.inf) else "["
            return f"{lo}{self.lower}, {self.upper})"
        if self.kind == "integers":
            return "{0, 1, 2, ...}"
        if self.kind == "binary":
            return "{0, 1}"
        if self.kind == "euclidean":
            return f"R^{self.dim}"
        if self.kind == "simplex":
            return f"open simplex in R^{self.dim}"
        if self.kind == "spd":
            return f"SPD({self.dim})"
        return self.kind


def spd_cholesky(mat: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor; raises NotSPD on failure or asymmetry."""
    arr = np.asarray(mat, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise NotSPD(f"expected a square matrix, got shape {arr.shape}")
    if not np.allclose(arr, arr.T, rtol=1e-10, atol=1e-12 * (1.0 + np.abs(arr).max())):
        raise NotSPD("matrix is not symmetric")
    try:
        return np.linalg.cholesky(symmetrize(arr))
    except np.linalg.LinAlgError as exc:
        raise NotSPD("matrix is not positive definite") from exc


def spd_inverse(mat: np.ndarray) -> np.ndarray:
    """Inverse through the Cholesky factor, re-symmetrized."""
    chol = spd_cholesky(mat)
    ident = np.eye(mat.shape[0])
    inv_l = np.linalg.solve(chol, ident)
    return symmetrize(inv_l.T @ inv_l)


def spd_logdet(mat: np.ndarray) -> float:
    return 2.0 * float(np.sum(np.log(np.diag(spd_cholesky(mat)))))


class ExponentialFamily(abc.ABC):
    """Contract for one exponential family with a fixed canonical factorization."""

    family_id: str
    order: int
    sample_dim: int
    layout: tuple
    support: Support
    is_discrete: bool = False
    has_entropy: bool = True
    has_moment: bool = True
    has_carrier_expectation: bool = True
    has_sampler: bool = True
    has_omega_solver: bool = False

    # ------------------------------------------------------------------
    # abstract pieces supplied per family
    # ------------------------------------------------------------------

    @abc.abstractmethod
    def _validate_source(self, blocks) -> None:
        """Raise InvalidParameter when blocks are outside the source domain."""

    @abc.abstractmethod
    def _validate_natural(self, blocks) -> None:
        """Raise NaturalDomainViolation when blocks are outside the natural domain."""

    @abc.abstractmethod
    def _theta(self, lam_blocks) -> tuple:
        """Source-to-natural conversion."""

    @abc.abstractmethod
    def _lambda(self, theta_blocks) -> tuple:
        """Natural-to-source conversion (inverse of ``_theta``)."""

    @abc.abstractmethod
    def _suff_stat(self, x) -> tuple:
        """t(x), blocks mirroring the natural layout."""

    @abc.abstractmethod
    def _carrier(self, x) -> float:
        """k(x)."""

    @abc.abstractmethod
    def _log_density(self, lam_blocks, x) -> float:
        """Published log-density formula; must not go through the cumulant."""

    @abc.abstractmethod
    def in_support(self, x) -> bool: ...

    @abc.abstractmethod
    def default_omega(self):
        """The canonical reference point used by the cumulant-free formulas."""

    # optional capabilities ------------------------------------------------

    def _moment(self, lam_blocks) -> tuple:
        raise Unsupported(f"{self.family_id}: moment parameter not available")

    def _entropy(self, lam_blocks) -> float:
        raise Unsupported(f"{self.family_id}: entropy not available")

    def _carrier_expectation(self, lam_blocks) -> float:
        raise Unsupported(f"{self.family_id}: E[k(x)] not available")

    def _sample(self, lam_blocks, n: int, rng: np.random.Generator):
        raise Unsupported(f"{self.family_id}: no sampler")

    def _omega_points(self, lam_blocks) -> list:
        raise Unsupported(f"{self.family_id}: no omega-point solver")

    def natural_derivative(self, lam: "Param") -> float:
        """d theta / d lambda for order-1 scalar families."""
        raise Unsupported(f"{self.family_id}: scalar natural derivative undefined")

    # ------------------------------------------------------------------
    # validated constructors
    # ------------------------------------------------------------------

    def _coerce(self, blocks) -> tuple:
        if len(blocks) != len(self.layout):
            raise InvalidParameter(
                f"{self.family_id}: expected {len(self.layout)} parameter blocks, got {len(blocks)}")
        out = []
        for spec, raw in zip(self.layout, blocks):
            blk = as_block(raw)
            if spec == "s":
                if np.ndim(blk) != 0:
                    raise InvalidParameter(f"{self.family_id}: expected scalar block, got array")
            elif spec[0] == "v":
                if np.ndim(blk) != 1 or blk.shape[0] != spec[1]:
                    raise InvalidParameter(
                        f"{self.family_id}: expected vector block of length {spec[1]}")
            else:  # ("m", n)
                if np.ndim(blk) != 2 or blk.shape != (spec[1], spec[1]):
                    raise InvalidParameter(
                        f"{self.family_id}: expected {spec[1]}x{spec[1]} matrix block")
                if not np.allclose(blk, blk.T, rtol=1e-8, atol=1e-10 * (1.0 + np.abs(blk).max())):
                    raise InvalidParameter(f"{self.family_id}: matrix block is not symmetric")
                blk = as_block(symmetrize(blk))
            out.append(blk)
        return tuple(out)

    def source(self, *blocks) -> Param:
        """Validated source parameter."""
        coerced = self._coerce(blocks)
        self._validate_source(coerced)
        return Param(ParamKind.SOURCE, coerced, self.family_id)

    def natural(self, *blocks) -> Param:
        """Validated natural parameter."""
        coerced = self._coerce(blocks)
        self._validate_natural(coerced)
        return Param(ParamKind.NATURAL, coerced, self.family_id)

    def _check(self, param: Param, kind: ParamKind) -> None:
        if param.family_id != self.family_id:
            raise InvalidParameter(
                f"parameter belongs to family '{param.family_id}', not '{self.family_id}'")
        if param.kind is not kind:
            raise InvalidParameter(f"expected a {kind.value} parameter, got {param.kind.value}")

    # ------------------------------------------------------------------
    # conversions and density work
    # ------------------------------------------------------------------

    def to_natural(self, lam: Param) -> Param:
        self._check(lam, ParamKind.SOURCE)
        return Param(ParamKind.NATURAL, self._coerce(self._theta(lam.blocks)), self.family_id)

    def to_source(self, theta: Param) -> Param:
        self._check(theta, ParamKind.NATURAL)
        return Param(ParamKind.SOURCE, self._coerce(self._lambda(theta.blocks)), self.family_id)

    def log_density(self, lam: Param, x) -> float:
        self._check(lam, ParamKind.SOURCE)
        if not self.in_support(x):
            raise OutOfSupport(f"{self.family_id}: {x!r} not in support {self.support.describe()}")
        return float(self._log_density(lam.blocks, x))

    def log_density_batch(self, lam: Param, xs) -> np.ndarray:
        """Vectorized log density; points are assumed in-support."""
        self._check(lam, ParamKind.SOURCE)
        return np.array([self._log_density(lam.blocks, x) for x in xs], dtype=float)

    def log_unnormalized_density(self, lam: Param, x) -> float:
        """theta(lam) . t(x) + k(x); differs from log_density by -F(theta), constant in x."""
        self._check(lam, ParamKind.SOURCE)
        if not self.in_support(x):
            raise OutOfSupport(f"{self.family_id}: {x!r} not in support {self.support.describe()}")
        theta = self._theta(lam.blocks)
        return block_dot(theta, self._suff_stat(x)) + float(self._carrier(x))

    def sufficient_stat(self, x) -> SuffStat:
        if not self.in_support(x):
            raise OutOfSupport(f"{self.family_id}: {x!r} not in support {self.support.describe()}")
        return SuffStat(tuple(as_block(b) for b in self._suff_stat(x)), self.family_id)

    def carrier(self, x) -> float:
        if not self.in_support(x):
            raise OutOfSupport(f"{self.family_id}: {x!r} not in support {self.support.describe()}")
        return float(self._carrier(x))

    def moment(self, lam: Param) -> Param:
        """Moment parameter E[t(x)] via the family's closed form."""
        self._check(lam, ParamKind.SOURCE)
        if not self.has_moment:
            raise Unsupported(f"{self.family_id}: moment parameter not available")
        return Param(ParamKind.MOMENT, self._coerce(self._moment(lam.blocks)), self.family_id)

    def entropy(self, lam: Param) -> float:
        self._check(lam, ParamKind.SOURCE)
        if not self.has_entropy:
            raise Unsupported(f"{self.family_id}: entropy not available")
        return float(self._entropy(lam.blocks))

    def carrier_expectation(self, lam: Param) -> float:
        """E[k(x)] under p_lam; 0 for families with k == 0."""
        self._check(lam, ParamKind.SOURCE)
        if not self.has_carrier_expectation:
            raise Unsupported(f"{self.family_id}: E[k(x)] not available")
        return float(self._carrier_expectation(lam.blocks))

    def sample(self, lam: Param, n: int, rng: np.random.Generator):
        self._check(lam, ParamKind.SOURCE)
        if not self.has_sampler:
            raise Unsupported(f"{self.family_id}: no sampler")
        return self._sample(lam.blocks, int(n), rng)

    def omega_points(self, lam: Param) -> list:
        """Support points whose mean sufficient statistic equals moment(lam).

        At these points the KL divergence collapses to an exact average of
        log density ratios.
        """
        self._check(lam, ParamKind.SOURCE)
        if not self.has_omega_solver:
            raise Unsupported(f"{self.family_id}: no omega-point solver")
        return self._omega_points(lam.blocks)

    def implicit_cumulant(self, lam: Param, omega) -> float:
        """F(theta(lam)) recovered from the density at omega (diagnostic only)."""
        self._check(lam, ParamKind.SOURCE)
        if not self.in_support(omega):
            raise OutOfSupport(f"{self.family_id}: omega {omega!r} not in support")
        theta = self._theta(lam.blocks)
        return (block_dot(theta, self._suff_stat(omega)) + float(self._carrier(omega))
                - float(self._log_density(lam.blocks, omega)))

    # ------------------------------------------------------------------

    def quadrature_interval(self):
        """(lo, hi, pack) when the family admits 1-D quadrature, else None.

        ``pack`` maps a quadrature abscissa to a sample point (identity for
        scalar-sample families; a wrapper for dimension-1 vector families).
        """
        if self.support.kind == "interval":
            return (self.support.lower, self.support.upper, lambda x: x)
        if self.support.kind == "euclidean" and self.support.dim == 1:
            return (-math.inf, math.inf, lambda x: np.array([x]))
        if self.support.kind == "spd" and self.support.dim == 1:
            return (0.0, math.inf, lambda x: np.array([[x]]))
        return None

    def __repr__(self):
        return (f"<{type(self).__name__} id={self.family_id!r} order={self.order} "
                f"sample_dim={self.sample_dim} support={self.support.describe()}>")


class UnivariateFamily(ExponentialFamily):
    """Base for families with scalar samples; batch density goes through ufuncs."""

    sample_dim = 1

    def log_density_batch(self, lam: Param, xs) -> np.ndarray:
        self._check(lam, ParamKind.SOURCE)
        return np.asarray(self._log_density(lam.blocks, np.asarray(xs, dtype=float)), dtype=float)
