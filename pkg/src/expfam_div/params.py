"""Block-structured parameter vectors.

Parameters of an exponential family are ordered tuples of blocks, where each
block is a scalar, a 1-D vector, or a symmetric matrix.  Keeping the block
structure (instead of flattening) lets matrix-valued families mix naturally:
inner products sum per-block traces and affine combinations act blockwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter

Block = "float | np.ndarray"


class ParamKind(enum.Enum):
    SOURCE = "source"
    NATURAL = "natural"
    MOMENT = "moment"


def as_block(value):
    """Coerce a value to a canonical block: float, read-only vector or matrix."""
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        return float(arr)
    if arr.ndim > 2:
        raise InvalidParameter(f"blocks must have ndim <= 2, got {arr.ndim}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


def symmetrize(mat: np.ndarray) -> np.ndarray:
    """Return (M + M^T)/2; guards matrix blocks against drift off the symmetric cone."""
    return 0.5 * (mat + mat.T)


def block_dot(a_blocks, b_blocks) -> float:
    """Sum of per-block inner products: scalar products, vector dots, Frobenius traces."""
    total = 0.0
    for a, b in zip(a_blocks, b_blocks, strict=True):
        if np.ndim(a) == 0:
            total += float(a) * float(b)
        else:
            total += float(np.sum(np.asarray(a) * np.asarray(b)))
    return total


def block_mix(wa: float, a_blocks, wb: float, b_blocks) -> tuple:
    """Blockwise affine combination wa*a + wb*b."""
    return tuple(wa * np.asarray(a) + wb * np.asarray(b) if np.ndim(a) else wa * a + wb * b
                 for a, b in zip(a_blocks, b_blocks, strict=True))


def block_sub(a_blocks, b_blocks) -> tuple:
    return block_mix(1.0, a_blocks, -1.0, b_blocks)


def block_flatten(blocks) -> np.ndarray:
    """Concatenate all block entries into one 1-D array (diagnostics, MC errors)."""
    parts = [np.atleast_1d(np.asarray(b, dtype=float)).ravel() for b in blocks]
    return np.concatenate(parts) if parts else np.zeros(0)


def blocks_allclose(a_blocks, b_blocks, rtol=1e-12, atol=0.0) -> bool:
    return all(
        np.allclose(np.asarray(a), np.asarray(b), rtol=rtol, atol=atol)
        for a, b in zip(a_blocks, b_blocks, strict=True)
    )


@dataclass(frozen=True)
class Param:
    """A tagged parameter vector of one family.

    ``kind`` records which coordinate system the blocks live in (source,
    natural, or moment).  Instances are created through family methods which
    validate the blocks eagerly, so a constructed Param is always in-domain.
    """

    kind: ParamKind
    blocks: tuple
    family_id: str

    def __iter__(self):
        return iter(self.blocks)

    def __getitem__(self, i):
        return self.blocks[i]

    def flatten(self) -> np.ndarray:
        return block_flatten(self.blocks)


@dataclass(frozen=True)
class SuffStat:
    """Value of the sufficient statistic t(x); blocks mirror the natural layout."""

    blocks: tuple
    family_id: str

    def __iter__(self):
        return iter(self.blocks)

    def __getitem__(self, i):
        return self.blocks[i]

    def flatten(self) -> np.ndarray:
        return block_flatten(self.blocks)
