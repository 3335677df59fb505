"""Voxelization of atomic coordinates into multi-channel binary grids.

Coordinate convention: the render window is a cube of ``side`` voxels at
``resolution`` angstroms per voxel, centered on the origin.  Voxel
``(i, j, k)`` has its center at ``(i - side/2 + 0.5) * resolution`` along
each axis.  ``pca_align`` therefore translates a structure's center of mass
(all atoms weighted equally) to the origin, which is the window center.

Alignment maps the principal axes of the atomic coordinates, eigenvalues
descending, onto the window's x, y, z axes.  The sign of each axis is fixed
so that the sum of the incoming (untranslated) coordinates projected on it
is non-negative; an effectively-zero sum falls back to orienting the axis
vector's largest-magnitude component positive.  This makes the alignment
deterministic and equivariant under rotations of the input.

Rasterization is space-filling with union semantics: a voxel is set in a
channel as soon as one atom assigned to that channel covers the voxel
center within the element's van der Waals radius.  Atoms or sphere parts
outside the window are clipped silently; a per-call summary of clipped atom
centers is logged.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Iterable, Mapping as MappingABC, Sequence

import numpy as np

from .atoms import VDW_RADII, AtomRecord
from .errors import DegenerateGeometry, UnknownElement
from .grids import ChannelGrid, GridKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RenderWindow:
    """Cubic render volume: side in voxels, resolution in angstroms/voxel."""

    side: int = 64
    resolution: float = 1.0

    def __post_init__(self):
        if self.side < 1 or self.side & (self.side - 1):
            raise ValueError(f"side must be a positive power of two, got {self.side}")
        if not self.resolution > 0:
            raise ValueError(f"resolution must be positive, got {self.resolution}")

    def axis_centers(self) -> np.ndarray:
        """Voxel-center coordinates along one axis, in angstroms."""
        return (np.arange(self.side) - self.side / 2 + 0.5) * self.resolution


@dataclass(frozen=True)
class ChannelScheme:
    """Channel layout for rasterization.

    ``residue_channels`` maps residue names to the channel index they light;
    ``atom_name_channels`` maps atom names (e.g. alpha/beta carbons) to an
    additional channel.  One atom can light both a residue channel and an
    atom-name channel.
    """

    names: tuple[str, ...]
    residue_channels: MappingABC[str, int]
    atom_name_channels: MappingABC[str, int]

    def channels_for(self, atom: AtomRecord) -> list[int]:
        out = []
        res = self.residue_channels.get(atom.residue.upper())
        if res is not None:
            out.append(res)
        extra = self.atom_name_channels.get(atom.atom_name.upper())
        if extra is not None:
            out.append(extra)
        return out


# The 8-channel residue/carbon encoding used for Ras-style protein grids.
RAS8 = ChannelScheme(
    names=(
        "aliphatic",
        "aromatic",
        "neutral",
        "acidic",
        "basic",
        "glycine_proline",
        "alpha_carbon",
        "beta_carbon",
    ),
    residue_channels={
        "ALA": 0, "VAL": 0, "LEU": 0, "ILE": 0, "MET": 0,
        "PHE": 1, "TRP": 1, "TYR": 1,
        "SER": 2, "THR": 2, "ASN": 2, "GLN": 2, "CYS": 2,
        "ASP": 3, "GLU": 3,
        "LYS": 4, "ARG": 4, "HIS": 4,
        "GLY": 5, "PRO": 5,
    },
    atom_name_channels={"CA": 6, "CB": 7},
)


def pca_align(atoms: Sequence[AtomRecord], *, rank_tol: float = 1e-9) -> list[AtomRecord]:
    """Rotate atoms onto their principal axes and center them on the origin.

    Axes are the eigenvectors of the coordinate covariance, ordered by
    descending eigenvalue onto x, y, z; signs follow the module convention.
    Raises DegenerateGeometry for fewer than 3 atoms or (near-)collinear
    input, where no plane of principal axes exists.
    """
    records = list(atoms)
    if len(records) < 3:
        raise DegenerateGeometry(f"need >= 3 atoms, got {len(records)}")
    coords = np.array([r.position for r in records], dtype=np.float64)
    centroid = coords.mean(axis=0)
    centered = coords - centroid
    cov = centered.T @ centered / len(records)

    evals, evecs = np.linalg.eigh(cov)
    order = np.argsort(evals)[::-1]
    evals = evals[order]
    axes = evecs[:, order]
    if evals[0] <= 0 or evals[1] <= rank_tol * evals[0]:
        raise DegenerateGeometry(
            "covariance is rank-deficient (coincident or collinear atoms); "
            f"eigenvalues {evals.tolist()}"
        )

    raw_sums = coords.sum(axis=0) @ axes
    tie = 1e-9 * len(records) * max(1.0, float(np.abs(coords).max()))
    for a in range(3):
        if raw_sums[a] < -tie:
            axes[:, a] = -axes[:, a]
        elif abs(raw_sums[a]) <= tie:
            hold = int(np.argmax(np.abs(axes[:, a])))
            if axes[hold, a] < 0:
                axes[:, a] = -axes[:, a]

    aligned = centered @ axes
    return [
        replace(rec, position=(float(p[0]), float(p[1]), float(p[2])))
        for rec, p in zip(records, aligned)
    ]


def rasterize(
    atoms: Iterable[AtomRecord],
    window: RenderWindow = RenderWindow(),
    scheme: ChannelScheme | None = RAS8,
    *,
    radii: MappingABC[str, float] = VDW_RADII,
    default_radius: float | None = None,
) -> ChannelGrid:
    """Render atoms as van der Waals spheres into a binary channel grid.

    With ``scheme=None`` every atom lights a single geometric occupancy
    channel; otherwise atoms light the channels the scheme assigns them.
    Raises UnknownElement for an element missing from ``radii`` unless a
    ``default_radius`` is given.
    """
    side = window.side
    res = window.resolution
    n_channels = 1 if scheme is None else len(scheme.names)
    values = np.zeros((n_channels,) + (side,) * 3, dtype=np.uint8)
    centers = window.axis_centers()
    half_extent = side * res / 2
    clipped = 0

    for atom in atoms:
        radius = radii.get(atom.element.upper(), default_radius)
        if radius is None:
            raise UnknownElement(
                f"no van der Waals radius for element {atom.element!r} "
                f"(atom serial {atom.serial}) and no default configured"
            )
        targets = [0] if scheme is None else scheme.channels_for(atom)
        pos = np.asarray(atom.position, dtype=np.float64)
        if np.any(np.abs(pos) > half_extent):
            clipped += 1
        if not targets:
            continue

        # Voxel-index bounding box of the sphere, clipped to the window.
        lo = np.ceil((pos - radius) / res + side / 2 - 0.5).astype(int)
        hi = np.floor((pos + radius) / res + side / 2 - 0.5).astype(int)
        lo = np.maximum(lo, 0)
        hi = np.minimum(hi, side - 1)
        if np.any(lo > hi):
            continue
        dx = centers[lo[0]:hi[0] + 1] - pos[0]
        dy = centers[lo[1]:hi[1] + 1] - pos[1]
        dz = centers[lo[2]:hi[2] + 1] - pos[2]
        inside = (
            dx[:, None, None] ** 2 + dy[None, :, None] ** 2 + dz[None, None, :] ** 2
        ) <= radius * radius
        for channel in targets:
            region = values[channel, lo[0]:hi[0] + 1, lo[1]:hi[1] + 1, lo[2]:hi[2] + 1]
            region[inside] = 1

    if clipped:
        logger.warning("%d atom center(s) fell outside the render window", clipped)
    return ChannelGrid(values, GridKind.BINARY)
