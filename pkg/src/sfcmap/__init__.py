"""Bijective space-filling-curve mappings between grids of different
dimensionality, with locality metrics and a voxelization front end."""

from .atoms import VDW_RADII, AtomRecord, parse_atoms
from .binvox import read_binvox, write_binvox
from .curves import (
    DEFAULT_MATERIALIZE_LIMIT,
    CurveFamily,
    CurveSpec,
    coord_to_index,
    coords_to_indices,
    index_to_coord,
    indices_to_coords,
    traversal,
)
from .errors import (
    BadFractions,
    BadHeader,
    BadMagic,
    BinvoxError,
    CapacityExceeded,
    CoordOutOfRange,
    CorruptTensorFile,
    DegenerateGeometry,
    IndexOutOfRange,
    LengthMismatch,
    MalformedRecord,
    MissingProvenance,
    RunOverflow,
    SfcmapError,
    ShapeMismatch,
    TruncatedPayload,
    UnknownElement,
    UnsupportedShape,
)
from .grids import ChannelGrid, GridKind
from .locality import (
    DEFAULT_EXACT_LIMIT,
    KernelSpec,
    LocalityReport,
    Measure,
    composed_locality,
    curve_locality,
    kernel_locality,
)
from .manifest import (
    SPLIT_NAMES,
    ManifestEntry,
    assign_splits,
    largest_remainder_sizes,
    read_manifest,
    write_manifest,
)
from .mapping import Mapping, compose, decode, encode, encode_stream
from .tensorfile import read_tensor, require_provenance, write_tensor
from .voxelize import RAS8, ChannelScheme, RenderWindow, pca_align, rasterize

__version__ = "0.1.0"

__all__ = [
    "AtomRecord",
    "BadFractions",
    "BadHeader",
    "BadMagic",
    "BinvoxError",
    "CapacityExceeded",
    "ChannelGrid",
    "ChannelScheme",
    "CoordOutOfRange",
    "CorruptTensorFile",
    "CurveFamily",
    "CurveSpec",
    "DEFAULT_EXACT_LIMIT",
    "DEFAULT_MATERIALIZE_LIMIT",
    "DegenerateGeometry",
    "GridKind",
    "IndexOutOfRange",
    "KernelSpec",
    "LengthMismatch",
    "LocalityReport",
    "MalformedRecord",
    "ManifestEntry",
    "Mapping",
    "Measure",
    "MissingProvenance",
    "RAS8",
    "RenderWindow",
    "RunOverflow",
    "SPLIT_NAMES",
    "SfcmapError",
    "ShapeMismatch",
    "TruncatedPayload",
    "UnknownElement",
    "UnsupportedShape",
    "VDW_RADII",
    "assign_splits",
    "compose",
    "composed_locality",
    "coord_to_index",
    "coords_to_indices",
    "curve_locality",
    "decode",
    "encode",
    "encode_stream",
    "index_to_coord",
    "indices_to_coords",
    "kernel_locality",
    "largest_remainder_sizes",
    "parse_atoms",
    "pca_align",
    "rasterize",
    "read_binvox",
    "read_manifest",
    "read_tensor",
    "require_provenance",
    "traversal",
    "write_binvox",
    "write_manifest",
    "write_tensor",
]
