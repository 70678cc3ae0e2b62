"""Weighted quasi-arithmetic means on source parameters.

The mean induced by a family's source-to-natural conversion is

    qam(fam, a, b, alpha) = lam( alpha * theta(a) + (1 - alpha) * theta(b) ),

i.e. a linear interpolation in natural coordinates pulled back to source
coordinates.  The weight ``alpha`` multiplies theta(a), the first argument.
Matrix-valued blocks make this a mean operator (e.g. the harmonic barycenter
of covariance matrices for Gaussian families).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidAlpha, NotSPD, Unsupported
from .family import ExponentialFamily, spd_cholesky, spd_inverse
from .params import Param, ParamKind, block_mix, symmetrize


@dataclass(frozen=True)
class MeanRequest:
    """A weighted quasi-arithmetic mean query on two source parameters."""

    family_id: str
    alpha: float
    a: Param
    b: Param


def qam(fam: ExponentialFamily, a: Param, b: Param, alpha: float = 0.5) -> Param:
    """Weighted quasi-arithmetic mean of two source parameters.

    For alpha in [0, 1] the mixed natural parameter stays in the (convex)
    natural domain; outside that range the mean is extrapolative and raises
    NaturalDomainViolation when the mixed point leaves the domain.
    """
    if not np.isfinite(alpha):
        raise InvalidAlpha(f"alpha must be finite, got {alpha}")
    theta_a = fam.to_natural(a)
    theta_b = fam.to_natural(b)
    mixed = block_mix(alpha, theta_a.blocks, 1.0 - alpha, theta_b.blocks)
    return fam.to_source(fam.natural(*mixed))


def resolve_mean(fam: ExponentialFamily, request: MeanRequest) -> Param:
    return qam(fam, request.a, request.b, request.alpha)


def qam_taylor(fam: ExponentialFamily, a: Param, b: Param, alpha: float) -> Param:
    """First-order expansion of qam(fam, a, b, alpha) around alpha = 0.

    Only defined for order-1 families:  b + alpha * (theta(a) - theta(b)) / theta'(b).
    The residual against the exact mean is O(alpha^2).
    """
    if fam.order != 1:
        raise Unsupported(f"{fam.family_id}: first-order mean expansion needs order 1")
    a_val = float(a.blocks[0])
    b_val = float(b.blocks[0])
    theta_a = float(fam.to_natural(a).blocks[0])
    theta_b = float(fam.to_natural(b).blocks[0])
    slope = fam.natural_derivative(b)
    return fam.source(b_val + alpha * (theta_a - theta_b) / slope)


def matrix_harmonic_barycenter(m1: np.ndarray, m2: np.ndarray, alpha: float = 0.5) -> np.ndarray:
    """(alpha * M1^-1 + (1 - alpha) * M2^-1)^-1 for SPD inputs; SPD for alpha in [0, 1]."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidAlpha(f"alpha must be in [0, 1], got {alpha}")
    inv_mix = alpha * spd_inverse(np.asarray(m1, dtype=float)) \
        + (1.0 - alpha) * spd_inverse(np.asarray(m2, dtype=float))
    out = spd_inverse(inv_mix)
    spd_cholesky(out)
    return symmetrize(out)
