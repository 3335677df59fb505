"""Discrete space-filling curves on power-of-two hypercube lattices.

Three curve families are provided, each a bijection between linear indices
``[0, 2**(dim*order))`` and lattice points ``[0, 2**order)**dim``:

* ``HILBERT`` -- computed with the iterative bitwise transpose algorithm
  (constant memory, ``O(dim * order)`` per conversion).  Consecutive indices
  always map to lattice points at Euclidean distance exactly 1.
* ``ZORDER`` -- plain bit interleaving of the index digits.
* ``GRAY_CODED`` -- bit deinterleaving of the binary-reflected Gray code of
  the index.

One canonical Hilbert orientation is implemented.  Rotated or reflected
variants are equally valid curves; bijectivity, adjacency and locality
properties do not depend on the orientation, but exact traversal orderings
do, so the orientation shipped here is pinned by golden tests.  All indexing
is 0-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import CapacityExceeded, CoordOutOfRange, IndexOutOfRange

# Largest bit width a curve index may occupy: keeps every index, and every
# row-major linear offset derived from it, inside a signed 64-bit integer.
_INDEX_BITS_MAX = 62

# Default cap on points materialized at once by traversal()/compose().
DEFAULT_MATERIALIZE_LIMIT = 1 << 24


class CurveFamily(enum.Enum):
    HILBERT = "hilbert"
    ZORDER = "zorder"
    GRAY_CODED = "gray"


@dataclass(frozen=True)
class CurveSpec:
    """One concrete curve: a family, a dimension and a recursion order.

    The grid side is ``2**order`` and the curve length is ``side**dim``.
    """

    family: CurveFamily
    dim: int
    order: int

    def __post_init__(self):
        if not isinstance(self.family, CurveFamily):
            raise ValueError(f"family must be a CurveFamily, got {self.family!r}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if self.dim * self.order > _INDEX_BITS_MAX:
            raise ValueError(
                f"2**({self.dim}*{self.order}) points exceeds the addressable "
                f"index range ({_INDEX_BITS_MAX} bits)"
            )

    @property
    def side(self) -> int:
        return 1 << self.order

    @property
    def length(self) -> int:
        return 1 << (self.dim * self.order)


def _split_axes(indices: np.ndarray, dim: int, order: int) -> np.ndarray:
    """Deinterleave index bits into per-axis words; axis 0 takes the most
    significant bit of each dim-sized group."""
    out = np.zeros((indices.shape[0], dim), dtype=np.int64)
    for a in range(dim):
        word = np.zeros_like(indices)
        for j in range(order):
            word |= ((indices >> (j * dim + (dim - 1 - a))) & 1) << j
        out[:, a] = word
    return out


def _merge_axes(axes: np.ndarray, dim: int, order: int) -> np.ndarray:
    """Inverse of :func:`_split_axes`."""
    out = np.zeros(axes.shape[0], dtype=np.int64)
    for a in range(dim):
        word = axes[:, a]
        for j in range(order):
            out |= ((word >> j) & 1) << (j * dim + (dim - 1 - a))
    return out


def _gray_decode(codes: np.ndarray) -> np.ndarray:
    out = codes.copy()
    for shift in (1, 2, 4, 8, 16, 32):
        out ^= out >> shift
    return out


def _transpose_to_axes(x: np.ndarray, order: int) -> np.ndarray:
    """Turn deinterleaved Hilbert index words into lattice coordinates.

    Vectorized form of the transpose-based decode: a Gray-code step followed
    by order-1 rounds of per-axis exchange/invert fixups.  Mutates ``x``.
    """
    dim = x.shape[1]
    t = x[:, dim - 1] >> 1
    for a in range(dim - 1, 0, -1):
        x[:, a] ^= x[:, a - 1]
    x[:, 0] ^= t

    side = 1 << order
    q = 2
    while q != side:
        mask = q - 1
        for a in range(dim - 1, -1, -1):
            x0 = x[:, 0]
            xa = x[:, a]
            cond = (xa & q) != 0
            swap = np.where(cond, 0, (x0 ^ xa) & mask)
            new_x0 = np.where(cond, x0 ^ mask, x0 ^ swap)
            if a == 0:
                x[:, 0] = new_x0
            else:
                x[:, a] = xa ^ swap
                x[:, 0] = new_x0
        q <<= 1
    return x


def _axes_to_transpose(x: np.ndarray, order: int) -> np.ndarray:
    """Inverse of :func:`_transpose_to_axes`.  Mutates ``x``."""
    dim = x.shape[1]
    m = 1 << (order - 1)
    q = m
    while q > 1:
        mask = q - 1
        for a in range(dim):
            x0 = x[:, 0]
            xa = x[:, a]
            cond = (xa & q) != 0
            swap = np.where(cond, 0, (x0 ^ xa) & mask)
            new_x0 = np.where(cond, x0 ^ mask, x0 ^ swap)
            if a == 0:
                x[:, 0] = new_x0
            else:
                x[:, a] = xa ^ swap
                x[:, 0] = new_x0
        q >>= 1

    for a in range(1, dim):
        x[:, a] ^= x[:, a - 1]
    t = np.zeros(x.shape[0], dtype=np.int64)
    q = m
    while q > 1:
        hot = (x[:, dim - 1] & q) != 0
        t ^= np.where(hot, q - 1, 0)
        q >>= 1
    for a in range(dim):
        x[:, a] ^= t
    return x


def indices_to_coords(spec: CurveSpec, indices) -> np.ndarray:
    """Map an array of linear curve indices to lattice coordinates.

    Returns an ``(n, dim)`` int64 array.  Raises IndexOutOfRange if any
    index falls outside ``[0, spec.length)``.
    """
    idx = np.asarray(indices)
    if idx.ndim != 1:
        raise ValueError("indices must be a 1-d array")
    try:
        idx = idx.astype(np.int64, casting="safe") if idx.dtype != np.int64 else idx
    except TypeError:
        raise IndexOutOfRange(f"indices not representable as int64: dtype {idx.dtype}")
    if idx.size and (int(idx.min()) < 0 or int(idx.max()) >= spec.length):
        raise IndexOutOfRange(
            f"index outside [0, {spec.length}) for {spec.family.value} "
            f"dim={spec.dim} order={spec.order}"
        )
    if spec.family is CurveFamily.ZORDER:
        return _split_axes(idx, spec.dim, spec.order)
    if spec.family is CurveFamily.GRAY_CODED:
        return _split_axes(idx ^ (idx >> 1), spec.dim, spec.order)
    x = _split_axes(idx, spec.dim, spec.order)
    return _transpose_to_axes(x, spec.order)


def coords_to_indices(spec: CurveSpec, coords) -> np.ndarray:
    """Map an ``(n, dim)`` array of lattice coordinates to linear indices."""
    c = np.asarray(coords)
    if c.ndim != 2 or c.shape[1] != spec.dim:
        raise CoordOutOfRange(
            f"expected coordinates of shape (n, {spec.dim}), got {c.shape}"
        )
    c = c.astype(np.int64) if c.dtype != np.int64 else c
    if c.size and (int(c.min()) < 0 or int(c.max()) >= spec.side):
        raise CoordOutOfRange(f"coordinate component outside [0, {spec.side})")
    if spec.family is CurveFamily.ZORDER:
        return _merge_axes(c, spec.dim, spec.order)
    if spec.family is CurveFamily.GRAY_CODED:
        return _gray_decode(_merge_axes(c, spec.dim, spec.order))
    x = _axes_to_transpose(c.copy(), spec.order)
    return _merge_axes(x, spec.dim, spec.order)


def index_to_coord(spec: CurveSpec, index: int) -> tuple[int, ...]:
    """Map one linear curve index to a lattice point."""
    if not 0 <= index < spec.length:
        raise IndexOutOfRange(f"index {index} outside [0, {spec.length})")
    row = indices_to_coords(spec, np.array([index], dtype=np.int64))[0]
    return tuple(int(v) for v in row)


def coord_to_index(spec: CurveSpec, coord) -> int:
    """Map one lattice point to its linear curve index."""
    c = tuple(coord)
    if len(c) != spec.dim:
        raise CoordOutOfRange(f"expected {spec.dim} components, got {len(c)}")
    if any(not 0 <= v < spec.side for v in c):
        raise CoordOutOfRange(f"coordinate {c} outside [0, {spec.side})**{spec.dim}")
    arr = np.array([c], dtype=np.int64)
    return int(coords_to_indices(spec, arr)[0])


def traversal(
    spec: CurveSpec, *, max_points: int = DEFAULT_MATERIALIZE_LIMIT
) -> np.ndarray:
    """Materialize the full visiting order of a curve.

    Returns a read-only ``(length, dim)`` int64 array whose row ``i`` is the
    lattice point visited at linear position ``i``.  The rows are a
    permutation of the full lattice; for the Hilbert family consecutive rows
    are always at Euclidean distance 1.
    """
    if spec.length > max_points:
        raise CapacityExceeded(
            f"traversal of {spec.length} points exceeds the materialization "
            f"limit of {max_points}"
        )
    coords = indices_to_coords(spec, np.arange(spec.length, dtype=np.int64))
    coords.flags.writeable = False
    return coords
