"""Locality-preservation measures for curves and composed mappings.

Three measures over unordered pairs of linear positions i < j:

* curve measure: sum of |i - j| / d(C(i), C(j)) over pairs, where d is
  Euclidean distance between the curve's lattice points.  Larger values mean
  better locality preservation: pairs close in index that stay close in
  space contribute large terms.
* composed measure: the same sum with distances taken between the paired
  target-space points of a composed mapping.
* kernel measure: the count of pairs simultaneously within a source reach
  and a target reach, i.e. pairs whose neighborhood relation survives the
  mapping.  Reaches are compared against Euclidean distance directly.

Exact evaluation enumerates all n*(n-1)/2 pairs and is limited to small
grids (the pair count is quadratic in the point count).  Larger grids use
seeded uniform pair sampling without replacement (PCG64); a report carries
the seed so results are reproducible.  Floating-point sums are computed with
``math.fsum`` and are therefore independent of pair enumeration order: a
full-pair sample reproduces the exact value bit for bit.

Distances between distinct points of a bijection are always positive; this
is asserted rather than special-cased.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .curves import CurveSpec, indices_to_coords
from .errors import CapacityExceeded
from .mapping import Mapping

# Exact evaluation cap, in lattice points (not pairs).
DEFAULT_EXACT_LIMIT = 4096

# Pair universes at most this large are sampled by enumerating all pairs and
# drawing a subset; beyond it, rejection sampling with explicit dedupe.
_ENUMERATION_PAIR_LIMIT = 1 << 23


class Measure(enum.Enum):
    CURVE = "curve"
    COMPOSED = "composed"
    KERNEL = "kernel"


@dataclass(frozen=True)
class KernelSpec:
    """Reach in source space and target space for the kernel measure.

    Reaches are non-negative and unbounded above; 0 admits no pair (distinct
    points never coincide) and a reach of side*sqrt(dim) covers the whole
    space.
    """

    k_source: float
    k_target: float

    def __post_init__(self):
        for name in ("k_source", "k_target"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class LocalityReport:
    """Result of one measure evaluation.

    ``value`` is a raw sum (curve/composed) or raw count (kernel); divide by
    ``pairs`` for an average.  ``exact`` is True only when every pair of the
    lattice was evaluated by enumeration; ``seed`` is set only for sampled
    evaluations.
    """

    measure: Measure
    value: float | int
    pairs: int
    exact: bool
    seed: int | None = None


def _pair_total(points: int) -> int:
    return points * (points - 1) // 2


def _all_pairs(points: int) -> tuple[np.ndarray, np.ndarray]:
    i, j = np.triu_indices(points, k=1)
    return i.astype(np.int64, copy=False), j.astype(np.int64, copy=False)


def _sampled_pairs(points: int, pairs: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw `pairs` distinct unordered pairs uniformly, deterministically per seed."""
    total = _pair_total(points)
    if pairs > total:
        raise ValueError(f"cannot draw {pairs} distinct pairs from {total}")
    rng = np.random.Generator(np.random.PCG64(seed))
    if total <= _ENUMERATION_PAIR_LIMIT:
        i_all, j_all = _all_pairs(points)
        chosen = rng.choice(total, size=pairs, replace=False)
        return i_all[chosen], j_all[chosen]

    # Pair universe too large to enumerate: rejection-sample index pairs.
    out_i = np.empty(pairs, dtype=np.int64)
    out_j = np.empty(pairs, dtype=np.int64)
    seen: set[tuple[int, int]] = set()
    have = 0
    while have < pairs:
        want = pairs - have
        draw = rng.integers(0, points, size=(int(want * 1.2) + 16, 2), dtype=np.int64)
        lo = draw.min(axis=1)
        hi = draw.max(axis=1)
        keep = lo != hi
        for a, b in zip(lo[keep], hi[keep]):
            key = (int(a), int(b))
            if key in seen:
                continue
            seen.add(key)
            out_i[have] = key[0]
            out_j[have] = key[1]
            have += 1
            if have == pairs:
                break
    return out_i, out_j


def _select_pairs(points: int, pairs: int | None, seed: int | None,
                  exact_limit: int) -> tuple[np.ndarray, np.ndarray, bool]:
    if pairs is None:
        if points > exact_limit:
            raise CapacityExceeded(
                f"exact evaluation over {points} points ({_pair_total(points)} "
                f"pairs) exceeds the limit of {exact_limit} points; use "
                f"sampled mode"
            )
        i, j = _all_pairs(points)
        return i, j, True
    if pairs < 1:
        raise ValueError("sampled mode needs pairs >= 1")
    if seed is None:
        raise ValueError("sampled mode needs a seed")
    i, j = _sampled_pairs(points, pairs, seed)
    return i, j, False


def _squared_distances(coords_i: np.ndarray, coords_j: np.ndarray) -> np.ndarray:
    diff = (coords_i - coords_j).astype(np.float64)
    return (diff * diff).sum(axis=1)


def _ratio_sum(idx_i: np.ndarray, idx_j: np.ndarray, coords_i: np.ndarray,
               coords_j: np.ndarray) -> float:
    d2 = _squared_distances(coords_i, coords_j)
    assert not np.any(d2 == 0.0), "bijective curves cannot map distinct indices together"
    terms = np.abs(idx_i - idx_j) / np.sqrt(d2)
    return math.fsum(terms)


def curve_locality(spec: CurveSpec, *, pairs: int | None = None,
                   seed: int | None = None,
                   exact_limit: int = DEFAULT_EXACT_LIMIT) -> LocalityReport:
    """Index-separation over spatial-separation sum for one curve.

    ``pairs=None`` evaluates every pair exactly (subject to ``exact_limit``);
    otherwise ``pairs`` are drawn without replacement using ``seed``.
    """
    i, j, exact = _select_pairs(spec.length, pairs, seed, exact_limit)
    value = _ratio_sum(i, j, indices_to_coords(spec, i), indices_to_coords(spec, j))
    return LocalityReport(Measure.CURVE, value, len(i), exact,
                          None if exact else seed)


def composed_locality(mapping: Mapping, *, pairs: int | None = None,
                      seed: int | None = None,
                      exact_limit: int = DEFAULT_EXACT_LIMIT) -> LocalityReport:
    """Same sum as :func:`curve_locality`, with distances in the mapping's
    target space at shared linear positions."""
    i, j, exact = _select_pairs(mapping.length, pairs, seed, exact_limit)
    value = _ratio_sum(i, j, mapping.target_coords[i], mapping.target_coords[j])
    return LocalityReport(Measure.COMPOSED, value, len(i), exact,
                          None if exact else seed)


def kernel_locality(mapping: Mapping, kernel: KernelSpec, *,
                    pairs: int | None = None, seed: int | None = None,
                    exact_limit: int = DEFAULT_EXACT_LIMIT) -> LocalityReport:
    """Count pairs within ``k_source`` in source space and ``k_target`` in
    target space simultaneously."""
    i, j, exact = _select_pairs(mapping.length, pairs, seed, exact_limit)
    d2_src = _squared_distances(mapping.source_coords[i], mapping.source_coords[j])
    d2_tgt = _squared_distances(mapping.target_coords[i], mapping.target_coords[j])
    assert not np.any(d2_src == 0.0) and not np.any(d2_tgt == 0.0)
    inside = (d2_src <= kernel.k_source ** 2) & (d2_tgt <= kernel.k_target ** 2)
    return LocalityReport(Measure.KERNEL, int(np.count_nonzero(inside)), len(i),
                          exact, None if exact else seed)
