"""Reader and writer for the binvox run-length-encoded voxel format.

A stream is a text header followed by a binary payload:

    #binvox 1
    dim 64 64 64
    translate 0 0 0
    scale 1
    data
    <pairs of bytes: value, count>

Payload voxels are ordered with the y coordinate running fastest, then z,
then x; this module's grids use (x, y, z) axis order, so the payload is
transposed on the way in and out.  ``translate`` and ``scale`` are parsed
and validated but not carried on the returned grid.  Writing re-canonicalizes
run lengths (maximal runs, capped at 255), so write(read(b)) reproduces the
voxel set of ``b`` but not necessarily its exact bytes; read(write(g))
always reproduces ``g`` exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import BadHeader, BadMagic, RunOverflow, ShapeMismatch, TruncatedPayload
from .grids import ChannelGrid, GridKind


def _read_line(data: bytes, pos: int) -> tuple[bytes, int]:
    end = data.find(b"\n", pos)
    if end < 0:
        raise BadHeader("header ended before a 'data' line", pos)
    return data[pos:end], end + 1


def read_binvox(data: bytes) -> ChannelGrid:
    """Parse a binvox byte stream into a mono-channel binary grid."""
    line, pos = _read_line(data, 0)
    if not line.startswith(b"#binvox"):
        raise BadMagic(f"expected '#binvox' magic, got {line[:16]!r}", 0)
    parts = line.split()
    if len(parts) != 2 or parts[1] != b"1":
        raise BadHeader(f"unsupported binvox version line {line!r}", 0)

    dims: tuple[int, int, int] | None = None
    dim_offset = 0
    while True:
        line_start = pos
        line, pos = _read_line(data, pos)
        fields = line.split()
        if not fields:
            raise BadHeader("blank header line", line_start)
        keyword = fields[0]
        if keyword == b"data":
            break
        if keyword == b"dim":
            try:
                d = tuple(int(v) for v in fields[1:])
            except ValueError:
                d = ()
            if len(d) != 3 or any(v < 1 for v in d):
                raise BadHeader(f"bad dim line {line!r}", line_start)
            dims = d  # type: ignore[assignment]
            dim_offset = line_start
        elif keyword == b"translate":
            try:
                values = [float(v) for v in fields[1:]]
            except ValueError:
                values = []
            if len(values) != 3:
                raise BadHeader(f"bad translate line {line!r}", line_start)
        elif keyword == b"scale":
            try:
                if len(fields) != 2:
                    raise ValueError
                float(fields[1])
            except ValueError:
                raise BadHeader(f"bad scale line {line!r}", line_start)
        else:
            raise BadHeader(f"unrecognized header line {line!r}", line_start)
    if dims is None:
        raise BadHeader("header has no dim line", pos)
    if len(set(dims)) != 1:
        raise BadHeader(f"non-cubic dims {dims} are not supported", dim_offset)

    payload = np.frombuffer(data, dtype=np.uint8, offset=pos)
    if payload.size % 2:
        raise TruncatedPayload("dangling value byte without a count", len(data) - 1)
    counts = payload[1::2].astype(np.int64)
    total = int(np.prod(np.array(dims, dtype=np.int64)))
    cumulative = np.cumsum(counts)
    filled = int(cumulative[-1]) if cumulative.size else 0
    if filled > total:
        bad = int(np.argmax(cumulative > total))
        raise RunOverflow(
            f"run #{bad} overruns the {total}-voxel grid", pos + 2 * bad
        )
    if filled < total:
        raise TruncatedPayload(
            f"payload covers {filled} of {total} voxels", len(data)
        )

    flat = np.repeat(payload[0::2], counts)
    occupied = (flat != 0).astype(np.uint8)
    # File order is [x][z][y]; canonicalize to [x][y][z].
    volume = occupied.reshape(dims).transpose(0, 2, 1)
    return ChannelGrid(volume[np.newaxis, ...].copy(), GridKind.BINARY)


def write_binvox(grid: ChannelGrid) -> bytes:
    """Serialize a mono-channel binary grid with power-of-two cubic shape."""
    if grid.kind is not GridKind.BINARY or grid.channels != 1:
        raise ShapeMismatch("binvox output requires a mono-channel binary grid")
    side = grid.side
    if grid.dim != 3 or side & (side - 1):
        raise ShapeMismatch(
            f"binvox output requires a power-of-two cubic grid, got shape {grid.shape}"
        )

    flat = grid.values[0].transpose(0, 2, 1).ravel()
    boundaries = np.flatnonzero(flat[1:] != flat[:-1]) + 1
    starts = np.concatenate([[0], boundaries])
    lengths = np.diff(np.concatenate([starts, [flat.size]]))
    run_values = flat[starts]

    full, remainder = np.divmod(lengths, 255)
    pairs_per_run = full + (remainder > 0)
    out_values = np.repeat(run_values, pairs_per_run)
    out_counts = np.full(int(pairs_per_run.sum()), 255, dtype=np.uint8)
    last_pair = np.cumsum(pairs_per_run) - 1
    has_tail = remainder > 0
    out_counts[last_pair[has_tail]] = remainder[has_tail].astype(np.uint8)

    rle = np.empty((out_values.size, 2), dtype=np.uint8)
    rle[:, 0] = out_values
    rle[:, 1] = out_counts
    header = (
        b"#binvox 1\n"
        + f"dim {side} {side} {side}\n".encode()
        + b"translate 0 0 0\n"
        + b"scale 1\n"
        + b"data\n"
    )
    return header + rle.tobytes()
