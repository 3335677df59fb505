"""Composed bijections between grids of different dimensionality.

Two curves of equal length induce a point-to-point bijection: linear
position i pairs the source curve's i-th lattice point with the target
curve's i-th lattice point.  Applying the bijection to a grid is a pure
relabeling of cells, identical for every channel and for binary and scalar
values alike, so encode followed by decode reproduces the input exactly.

The pairing is precomputed as flat lookup tables (source row-major offset
to target offset and back) so that encode/decode are single gather passes
over the value array; the memory cost is one int64 per lattice point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .curves import DEFAULT_MATERIALIZE_LIMIT, CurveSpec, traversal
from .errors import LengthMismatch, ShapeMismatch
from .grids import ChannelGrid


@dataclass(eq=False)
class Mapping:
    """A materialized bijection between two equal-length curves.

    ``source_coords[i]`` and ``target_coords[i]`` are the paired lattice
    points at linear position i.  Instances are immutable and safe to share
    across threads.
    """

    source: CurveSpec
    target: CurveSpec
    source_coords: np.ndarray
    target_coords: np.ndarray
    _gather: np.ndarray   # target offset -> paired source offset
    _scatter: np.ndarray  # source offset -> paired target offset

    @property
    def length(self) -> int:
        return self.source.length


def compose(source: CurveSpec, target: CurveSpec, *,
            max_points: int = DEFAULT_MATERIALIZE_LIMIT) -> Mapping:
    """Pair two curves of equal length into one bijective mapping."""
    if source.length != target.length:
        raise LengthMismatch(
            f"{source.side}**{source.dim} = {source.length} points != "
            f"{target.side}**{target.dim} = {target.length} points"
        )
    src = traversal(source, max_points=max_points)
    tgt = traversal(target, max_points=max_points)
    src_off = np.ravel_multi_index(tuple(src.T), (source.side,) * source.dim)
    tgt_off = np.ravel_multi_index(tuple(tgt.T), (target.side,) * target.dim)

    gather = np.empty(source.length, dtype=np.int64)
    gather[tgt_off] = src_off
    scatter = np.empty(source.length, dtype=np.int64)
    scatter[src_off] = tgt_off
    gather.flags.writeable = False
    scatter.flags.writeable = False
    return Mapping(source, target, src, tgt, gather, scatter)


def _check_shape(grid: ChannelGrid, spec: CurveSpec, role: str) -> None:
    if grid.dim != spec.dim or grid.side != spec.side:
        raise ShapeMismatch(
            f"grid shape {grid.shape} does not match the mapping's {role} "
            f"space ({spec.side},)*{spec.dim}"
        )


def encode(grid: ChannelGrid, mapping: Mapping) -> ChannelGrid:
    """Relabel a source-shaped grid into the target shape.

    For every linear position i and channel c, the output value at the
    target curve's i-th point equals the input value at the source curve's
    i-th point.
    """
    _check_shape(grid, mapping.source, "source")
    flat = grid.values.reshape(grid.channels, -1)
    out = flat[:, mapping._gather]
    shape = (grid.channels,) + (mapping.target.side,) * mapping.target.dim
    return ChannelGrid(out.reshape(shape), grid.kind)


def decode(grid: ChannelGrid, mapping: Mapping) -> ChannelGrid:
    """Invert :func:`encode`: relabel a target-shaped grid back to the source."""
    _check_shape(grid, mapping.target, "target")
    flat = grid.values.reshape(grid.channels, -1)
    out = flat[:, mapping._scatter]
    shape = (grid.channels,) + (mapping.source.side,) * mapping.source.dim
    return ChannelGrid(out.reshape(shape), grid.kind)


def encode_stream(grids: Iterable[ChannelGrid], mapping: Mapping) -> list[ChannelGrid]:
    """Encode a sequence of grids, preserving order.

    A ShapeMismatch on any item is re-raised with the item index attached.
    """
    out: list[ChannelGrid] = []
    for position, grid in enumerate(grids):
        try:
            out.append(encode(grid, mapping))
        except ShapeMismatch as exc:
            raise ShapeMismatch(f"item {position}: {exc}") from exc
    return out
