"""Dataset manifests and deterministic train/validation/test splitting.

A manifest is line-delimited JSON, one entry per structure.  Split
assignment is a pure function of the seed and the entry ids: entries are
grouped (per class label unless stratification is disabled), each group is
sorted by id, shuffled with a PCG64 generator, and sliced into splits whose
sizes follow the largest-remainder rule.  Fractions are handled as exact
decimal rationals so quota floors never suffer float rounding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import BadFractions

SPLIT_NAMES = ("train", "validation", "test")


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    source: str
    output: str
    shape: tuple[int, ...]
    channels: int
    label: str | None = None
    split: str | None = None

    def to_dict(self) -> dict:
        data = {
            "id": self.id,
            "source": self.source,
            "output": self.output,
            "shape": list(self.shape),
            "channels": self.channels,
            "label": self.label,
        }
        if self.split is not None:
            data["split"] = self.split
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ManifestEntry":
        return cls(
            id=str(data["id"]),
            source=str(data["source"]),
            output=str(data["output"]),
            shape=tuple(int(v) for v in data["shape"]),
            channels=int(data["channels"]),
            label=data.get("label"),
            split=data.get("split"),
        )


def read_manifest(path: str | Path) -> list[ManifestEntry]:
    entries = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            entries.append(ManifestEntry.from_dict(json.loads(line)))
    return entries


def write_manifest(target: str | Path | IO[str], entries: Iterable[ManifestEntry]) -> None:
    text = "".join(json.dumps(e.to_dict(), sort_keys=True) + "\n" for e in entries)
    if hasattr(target, "write"):
        target.write(text)
    else:
        Path(target).write_text(text)


def parse_fractions(values: Sequence[float | str | Fraction]) -> tuple[Fraction, ...]:
    """Validate and exactify three split fractions."""
    if len(values) != len(SPLIT_NAMES):
        raise BadFractions(f"expected {len(SPLIT_NAMES)} fractions, got {len(values)}")
    try:
        fracs = tuple(Fraction(str(v)) for v in values)
    except (ValueError, ZeroDivisionError) as exc:
        raise BadFractions(f"unparseable fractions {values!r}") from exc
    if any(f <= 0 for f in fracs):
        raise BadFractions(f"fractions must be positive, got {values!r}")
    if abs(float(sum(fracs)) - 1.0) > 1e-9:
        raise BadFractions(f"fractions must sum to 1, got {values!r}")
    return fracs


def largest_remainder_sizes(count: int, fractions: Sequence[Fraction]) -> list[int]:
    """Integer split sizes for `count` items: floor quotas, then award the
    leftover items to the largest fractional remainders (ties to the earlier
    split)."""
    quotas = [f * count for f in fractions]
    sizes = [int(q) for q in quotas]
    leftover = count - sum(sizes)
    by_remainder = sorted(
        range(len(fractions)), key=lambda k: (-(quotas[k] - sizes[k]), k)
    )
    for k in by_remainder[:leftover]:
        sizes[k] += 1
    return sizes


def assign_splits(
    entries: Sequence[ManifestEntry],
    fractions: Sequence[float | str | Fraction] = ("0.7", "0.1", "0.2"),
    seed: int = 0,
    *,
    stratify: bool = True,
) -> list[ManifestEntry]:
    """Return entries (original order) with train/validation/test assigned."""
    fracs = parse_fractions(fractions)
    if stratify:
        groups: dict[str, list[int]] = {}
        for position, entry in enumerate(entries):
            groups.setdefault(entry.label or "", []).append(position)
    else:
        groups = {"": list(range(len(entries)))}

    rng = np.random.Generator(np.random.PCG64(seed))
    assignment: dict[int, str] = {}
    for key in sorted(groups):
        members = sorted(groups[key], key=lambda pos: (entries[pos].id, pos))
        shuffled = [members[i] for i in rng.permutation(len(members))]
        sizes = largest_remainder_sizes(len(members), fracs)
        cursor = 0
        for name, size in zip(SPLIT_NAMES, sizes):
            for pos in shuffled[cursor:cursor + size]:
                assignment[pos] = name
            cursor += size
    return [replace(e, split=assignment[i]) for i, e in enumerate(entries)]
