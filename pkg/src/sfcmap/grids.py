"""Multi-channel hypercube grids.

A grid stores C channels over an m-dimensional lattice with equal side along
every axis.  Values live in one dense array of shape ``(channels, side, ...,
side)`` in canonical order: channel-major, then row-major (lexicographic)
over coordinates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class GridKind(enum.Enum):
    BINARY = "binary"
    SCALAR = "scalar"


_DTYPE = {GridKind.BINARY: np.dtype(np.uint8), GridKind.SCALAR: np.dtype(np.float64)}


@dataclass(eq=False)
class ChannelGrid:
    """C channels of binary or scalar values on a hypercube lattice.

    Binary grids hold only {0, 1} as uint8; scalar grids hold finite
    float64 values.  Treat instances as immutable once constructed.
    """

    values: np.ndarray
    kind: GridKind = GridKind.BINARY

    def __post_init__(self):
        arr = np.ascontiguousarray(self.values, dtype=_DTYPE[self.kind])
        if arr.ndim < 2:
            raise ValueError("values must have a channel axis plus >=1 spatial axis")
        spatial = arr.shape[1:]
        if len(set(spatial)) != 1:
            raise ValueError(f"spatial axes must share one side, got {spatial}")
        if arr.shape[0] < 1:
            raise ValueError("need at least one channel")
        if self.kind is GridKind.BINARY:
            if arr.size and arr.max() > 1:
                raise ValueError("binary grid contains values other than 0/1")
        else:
            if arr.size and not np.isfinite(arr).all():
                raise ValueError("scalar grid contains non-finite values")
        self.values = arr

    @property
    def channels(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.ndim - 1

    @property
    def side(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, ...]:
        """Spatial shape, excluding the channel axis."""
        return self.values.shape[1:]

    @property
    def points(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64))

    @classmethod
    def zeros(cls, side: int, dim: int, channels: int = 1,
              kind: GridKind = GridKind.BINARY) -> "ChannelGrid":
        return cls(np.zeros((channels,) + (side,) * dim, dtype=_DTYPE[kind]), kind)


def grid_dtype(kind: GridKind) -> np.dtype:
    """Canonical storage dtype for a grid kind."""
    return _DTYPE[kind]
