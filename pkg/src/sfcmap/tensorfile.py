"""Grid tensor files: a raw little-endian payload plus a JSON sidecar header.

A tensor named ``X.grid`` is two files:

* ``X.grid`` -- the dense values, channel-major then row-major, with no
  framing.  Binary grids store one uint8 per cell; scalar grids store one
  little-endian float64 per cell.
* ``X.grid.json`` -- a single JSON object with sorted keys::

      {
        "byte_order": "little",
        "channels": <int>,
        "dtype": "uint8" | "float64",
        "format": "sfcmap-grid/1",
        "kind": "binary" | "scalar",
        "layout": "channel-major,row-major",
        "mapping": null | {"source": SPEC, "target": SPEC},
        "shape": [<int>, ...]
      }

  where SPEC is ``{"family": "hilbert"|"zorder"|"gray", "dim": int,
  "order": int}``.  ``mapping`` carries the provenance of an encoded grid
  so it can be decoded without out-of-band knowledge.

The payload length must equal channels * prod(shape) * itemsize exactly.
Writing is deterministic: identical grids produce identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .curves import CurveFamily, CurveSpec
from .errors import CorruptTensorFile, MissingProvenance
from .grids import ChannelGrid, GridKind

FORMAT_TAG = "sfcmap-grid/1"

_DTYPE_NAMES = {GridKind.BINARY: "uint8", GridKind.SCALAR: "float64"}
_STORAGE = {"uint8": np.dtype(np.uint8), "float64": np.dtype("<f8")}


def spec_to_dict(spec: CurveSpec) -> dict:
    return {"family": spec.family.value, "dim": spec.dim, "order": spec.order}


def spec_from_dict(data: dict) -> CurveSpec:
    try:
        return CurveSpec(CurveFamily(data["family"]), int(data["dim"]), int(data["order"]))
    except (KeyError, ValueError, TypeError) as exc:
        raise CorruptTensorFile(f"bad curve spec in header: {data!r}") from exc


def sidecar_path(path: str | Path) -> Path:
    return Path(str(path) + ".json")


def write_tensor(path: str | Path, grid: ChannelGrid,
                 provenance: tuple[CurveSpec, CurveSpec] | None = None) -> None:
    """Write a grid and its sidecar header.

    ``provenance`` records the (source, target) curves of the mapping that
    produced an encoded grid; pass None for plain grids.
    """
    path = Path(path)
    payload = np.ascontiguousarray(grid.values, dtype=_STORAGE[_DTYPE_NAMES[grid.kind]])
    header = {
        "byte_order": "little",
        "channels": grid.channels,
        "dtype": _DTYPE_NAMES[grid.kind],
        "format": FORMAT_TAG,
        "kind": grid.kind.value,
        "layout": "channel-major,row-major",
        "mapping": None if provenance is None else {
            "source": spec_to_dict(provenance[0]),
            "target": spec_to_dict(provenance[1]),
        },
        "shape": list(grid.shape),
    }
    path.write_bytes(payload.tobytes())
    sidecar_path(path).write_text(json.dumps(header, sort_keys=True) + "\n")


def read_tensor(path: str | Path) -> tuple[ChannelGrid, tuple[CurveSpec, CurveSpec] | None]:
    """Read a grid and its optional mapping provenance."""
    path = Path(path)
    side = sidecar_path(path)
    if not side.exists():
        raise CorruptTensorFile(f"missing sidecar header {side}")
    try:
        header = json.loads(side.read_text())
    except json.JSONDecodeError as exc:
        raise CorruptTensorFile(f"unparseable sidecar header {side}: {exc}") from exc
    if header.get("format") != FORMAT_TAG:
        raise CorruptTensorFile(
            f"{side}: unknown format tag {header.get('format')!r}"
        )
    try:
        shape = tuple(int(v) for v in header["shape"])
        channels = int(header["channels"])
        kind = GridKind(header["kind"])
        dtype = _STORAGE[header["dtype"]]
        if header["byte_order"] != "little":
            raise CorruptTensorFile(f"{side}: unsupported byte order")
    except (KeyError, ValueError, TypeError) as exc:
        raise CorruptTensorFile(f"{side}: invalid header field: {exc}") from exc
    if _DTYPE_NAMES[kind] != header["dtype"]:
        raise CorruptTensorFile(
            f"{side}: dtype {header['dtype']!r} conflicts with kind {kind.value!r}"
        )

    raw = path.read_bytes()
    expected = channels * int(np.prod(np.array(shape, dtype=np.int64))) * dtype.itemsize
    if len(raw) != expected:
        raise CorruptTensorFile(
            f"{path}: payload is {len(raw)} bytes, header requires {expected} "
            f"(divergence at byte {min(len(raw), expected)})"
        )
    values = np.frombuffer(raw, dtype=dtype).reshape((channels,) + shape)
    grid = ChannelGrid(values.copy(), kind)

    mapping = header.get("mapping")
    if mapping is None:
        return grid, None
    return grid, (spec_from_dict(mapping["source"]), spec_from_dict(mapping["target"]))


def require_provenance(path: str | Path) -> tuple[ChannelGrid, tuple[CurveSpec, CurveSpec]]:
    """Read a tensor whose header must carry mapping provenance."""
    grid, provenance = read_tensor(path)
    if provenance is None:
        raise MissingProvenance(f"{path}: header has no mapping provenance")
    return grid, provenance
