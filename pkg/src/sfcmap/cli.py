"""Command-line front end: voxelize, encode, decode, split, locality, export-png.

Exit codes: 0 success, 1 usage error, 2 data error, 3 capacity error.
Every command is deterministic for fixed inputs, flags and seed, regardless
of --jobs: work may run in parallel but results are collected and emitted in
input order.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from PIL import Image

from . import binvox, manifest as manifest_mod, tensorfile
from .atoms import VDW_RADII, parse_atoms
from .curves import CurveFamily, CurveSpec
from .errors import (
    CapacityExceeded,
    LengthMismatch,
    SfcmapError,
    ShapeMismatch,
    UnsupportedShape,
)
from .grids import GridKind
from .locality import KernelSpec, composed_locality, curve_locality, kernel_locality
from .mapping import Mapping, compose, decode, encode
from .voxelize import RAS8, RenderWindow, pca_align, rasterize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_CAPACITY = 3

# Render colors for the 8-channel scheme, in channel order; later channels
# paint over earlier ones.
DEFAULT_PALETTE = (
    (0, 0, 255),      # aliphatic: blue
    (128, 0, 255),    # aromatic: purple
    (255, 0, 255),    # neutral: magenta
    (255, 102, 102),  # acidic: light red
    (139, 0, 0),      # basic: dark red
    (150, 75, 0),     # glycine/proline: brown
    (0, 100, 0),      # alpha carbons: dark green
    (144, 238, 144),  # beta carbons: light green
)

_MEASURE_ALIASES = {"eq1": "curve", "eq2": "composed", "eq3": "kernel"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common_flags(suppress_defaults: bool) -> argparse.ArgumentParser:
    # Subparsers use SUPPRESS so a flag given before the subcommand is not
    # clobbered by the subparser's defaults.
    common = argparse.ArgumentParser(add_help=False)

    def default(value):
        return argparse.SUPPRESS if suppress_defaults else value

    common.add_argument("--seed", type=int, default=default(0),
                        help="seed for every stochastic step (default 0)")
    common.add_argument("--jobs", type=int, default=default(1),
                        help="parallel workers for per-file work")
    common.add_argument("--keep-going", action="store_true",
                        default=default(False),
                        help="report per-file failures but keep processing")
    common.add_argument("--verbose", action="store_true", default=default(False))
    return common


def _build_parser() -> _Parser:
    common = _common_flags(suppress_defaults=True)
    parser = _Parser(prog="sfcmap", description=__doc__,
                     parents=[_common_flags(suppress_defaults=False)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("voxelize", parents=[common],
                       help="turn binvox or atom-record files into grid tensors")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--channels", choices=["mono", "ras8"], default="ras8",
                   help="channel scheme for atom-record inputs (binvox is always mono)")
    p.add_argument("--side", type=int, default=64)
    p.add_argument("--resolution", type=float, default=1.0)
    p.add_argument("--include-hetatm", action="store_true")
    p.add_argument("--default-radius", type=float, default=None,
                   help="radius for elements missing from the built-in table")
    p.add_argument("--radius", action="append", default=[], metavar="EL=ANGSTROMS",
                   help="override or add one table entry (repeatable)")
    p.add_argument("--label", default=None,
                   help="class label for all inputs (default: parent directory name)")
    p.add_argument("--input-format", choices=["auto", "binvox", "pdb"], default="auto")
    p.add_argument("--manifest-out", default=None)
    p.set_defaults(func=_cmd_voxelize)

    p = sub.add_parser("encode", parents=[common],
                       help="map grid tensors to a lower dimension")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--manifest", default=None,
                   help="process every output file listed in this manifest")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--target-dim", type=int, choices=[1, 2], required=True)
    p.add_argument("--target-order", type=int, default=None,
                   help="target curve order (default: inferred from the input shape)")
    p.add_argument("--family", choices=[f.value for f in CurveFamily], default="hilbert")
    p.add_argument("--manifest-out", default=None)
    p.set_defaults(func=_cmd_encode)

    p = sub.add_parser("decode", parents=[common],
                       help="invert encoded tensors back to their source shape")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--manifest", default=None)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--manifest-out", default=None)
    p.set_defaults(func=_cmd_decode)

    p = sub.add_parser("split", parents=[common],
                       help="assign train/validation/test splits in a manifest")
    p.add_argument("manifest")
    p.add_argument("--fractions", default="0.7,0.1,0.2")
    p.add_argument("--no-stratify", action="store_true",
                   help="shuffle the whole pool instead of per-label groups")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.set_defaults(func=_cmd_split)

    p = sub.add_parser("locality", parents=[common],
                       help="report locality-preservation measures as CSV")
    p.add_argument("--measure", required=True,
                   choices=sorted({"curve", "composed", "kernel", *_MEASURE_ALIASES}),
                   help="curve (alias eq1), composed (eq2) or kernel (eq3)")
    p.add_argument("--family", choices=[f.value for f in CurveFamily],
                   default="hilbert")
    p.add_argument("-m", "--dim", type=int, required=True)
    p.add_argument("-p", "--order", type=int, required=True)
    p.add_argument("--target-dim", type=int, default=None)
    p.add_argument("--target-order", type=int, default=None)
    p.add_argument("--k-source", type=float, default=None)
    p.add_argument("--k-target", type=float, default=None)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--pairs", type=int, default=None)
    p.add_argument("--exact-limit", type=int, default=4096,
                   help="point-count cap for exact evaluation")
    p.add_argument("--csv", default=None, help="also write the CSV to this path")
    p.set_defaults(func=_cmd_locality)

    p = sub.add_parser("export-png", parents=[common],
                       help="render a 2-d grid tensor as a PNG image")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--channel-colors", default=None,
                   help="comma-separated #rrggbb overrides for the channel palette")
    p.set_defaults(func=_cmd_export_png)
    return parser


def _run_per_file(paths, worker, jobs: int, keep_going: bool):
    """Apply `worker` to each path, in input order, collecting failures."""
    results, failures = [], []
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(worker, p) for p in paths]
            outcomes = []
            for future in futures:
                try:
                    outcomes.append((future.result(), None))
                except Exception as exc:  # noqa: BLE001 - reported per file
                    outcomes.append((None, exc))
    else:
        outcomes = []
        for p in paths:
            try:
                outcomes.append((worker(p), None))
            except Exception as exc:  # noqa: BLE001
                outcomes.append((None, exc))
    for path, (result, exc) in zip(paths, outcomes):
        if exc is None:
            results.append(result)
        else:
            failures.append((path, exc))
            print(f"sfcmap: {path}: {exc}", file=sys.stderr)
            if not keep_going:
                break
    return results, failures


def _finish_batch(failures, keep_going: bool, total: int) -> int:
    if failures:
        if keep_going:
            print(f"sfcmap: {len(failures)} of {total} inputs failed",
                  file=sys.stderr)
            return EXIT_OK
        return EXIT_CAPACITY if isinstance(failures[0][1], CapacityExceeded) else EXIT_DATA
    return EXIT_OK


def _detect_format(path: Path, forced: str) -> str:
    if forced != "auto":
        return forced
    if path.suffix.lower() == ".binvox":
        return "binvox"
    if path.suffix.lower() in (".pdb", ".ent"):
        return "pdb"
    raise SfcmapError(f"{path}: cannot infer input format; pass --input-format")


def _assign_output_names(inputs) -> dict[str, str]:
    """Output stem per input; colliding stems get the parent directory
    prepended (class directories commonly reuse file names)."""
    from collections import Counter

    stem_counts = Counter(Path(raw).stem for raw in inputs)
    names: dict[str, str] = {}
    owners: dict[str, str] = {}
    for raw in inputs:
        path = Path(raw)
        name = path.stem if stem_counts[path.stem] == 1 \
            else f"{path.resolve().parent.name}_{path.stem}"
        if owners.setdefault(name, raw) != raw:
            raise SfcmapError(
                f"inputs {owners[name]!r} and {raw!r} both map to output "
                f"{name!r}; rename one"
            )
        names[raw] = name
    return names


def _parse_radius_overrides(tokens) -> dict[str, float]:
    radii = dict(VDW_RADII)
    for token in tokens:
        element, _, value = token.partition("=")
        if not element or not value:
            raise SfcmapError(f"bad --radius {token!r}; expected EL=ANGSTROMS")
        radii[element.strip().upper()] = float(value)
    return radii


def _cmd_voxelize(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    window = RenderWindow(side=args.side, resolution=args.resolution)
    scheme = None if args.channels == "mono" else RAS8
    radii = _parse_radius_overrides(args.radius)
    out_names = _assign_output_names(args.inputs)

    def worker(raw: str) -> manifest_mod.ManifestEntry:
        path = Path(raw)
        kind = _detect_format(path, args.input_format)
        if kind == "binvox":
            grid = binvox.read_binvox(path.read_bytes())
        else:
            with open(path) as handle:
                atoms = parse_atoms(handle, include_hetatm=args.include_hetatm)
            aligned = pca_align(atoms)
            grid = rasterize(aligned, window, scheme, radii=radii,
                             default_radius=args.default_radius)
        out_path = out_dir / (out_names[raw] + ".grid")
        tensorfile.write_tensor(out_path, grid)
        label = args.label if args.label is not None else path.resolve().parent.name
        return manifest_mod.ManifestEntry(
            id=out_names[raw], source=str(path), output=str(out_path),
            shape=grid.shape, channels=grid.channels, label=label,
        )

    entries, failures = _run_per_file(args.inputs, worker, args.jobs, args.keep_going)
    if args.manifest_out:
        manifest_mod.write_manifest(args.manifest_out, entries)
    return _finish_batch(failures, args.keep_going, len(args.inputs))


def _order_from_side(side: int) -> int:
    order = side.bit_length() - 1
    if side < 2 or (1 << order) != side:
        raise ShapeMismatch(f"grid side {side} is not a power of two")
    return order


def _gather_inputs(args) -> tuple[list[str], list[manifest_mod.ManifestEntry] | None]:
    if args.manifest:
        entries = manifest_mod.read_manifest(args.manifest)
        if args.inputs:
            raise SfcmapError("pass either input paths or --manifest, not both")
        return [e.output for e in entries], entries
    if not args.inputs:
        raise SfcmapError("no inputs given")
    return list(args.inputs), None


def _rewrite_entries(entries, produced, manifest_out) -> None:
    """Carry manifest entries over to the produced files, one for one.

    Entries whose file failed to process are kept unchanged so the manifest
    never drops or duplicates an entry.
    """
    if manifest_out and entries is not None:
        by_source = {src: item for src, item in produced}
        updated = []
        for entry in entries:
            if entry.output not in by_source:
                updated.append(entry)
                continue
            out_path, shape, channels = by_source[entry.output]
            updated.append(manifest_mod.ManifestEntry(
                id=entry.id, source=entry.output, output=str(out_path),
                shape=shape, channels=channels, label=entry.label,
                split=entry.split,
            ))
        manifest_mod.write_manifest(manifest_out, updated)


def _cmd_encode(args) -> int:
    inputs, entries = _gather_inputs(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    family = CurveFamily(args.family)
    mappings: dict[tuple, Mapping] = {}
    produced = []
    out_names = _assign_output_names(inputs)

    def worker(raw: str):
        grid, _ = tensorfile.read_tensor(raw)
        source = CurveSpec(family, grid.dim, _order_from_side(grid.side))
        if args.target_order is not None:
            target_order = args.target_order
        else:
            bits = source.dim * source.order
            if bits % args.target_dim:
                raise LengthMismatch(
                    f"{raw}: cannot infer --target-order: {source.length} points "
                    f"is not a power of 2**{args.target_dim}"
                )
            target_order = bits // args.target_dim
        target = CurveSpec(family, args.target_dim, target_order)
        key = (source, target)
        if key not in mappings:
            mappings[key] = compose(source, target)
        encoded = encode(grid, mappings[key])
        out_path = out_dir / (out_names[raw] + f".enc{args.target_dim}d.grid")
        tensorfile.write_tensor(out_path, encoded, provenance=(source, target))
        produced.append((raw, (out_path, encoded.shape, encoded.channels)))
        return out_path

    _, failures = _run_per_file(inputs, worker, args.jobs, args.keep_going)
    _rewrite_entries(entries, produced, args.manifest_out)
    return _finish_batch(failures, args.keep_going, len(inputs))


def _cmd_decode(args) -> int:
    inputs, entries = _gather_inputs(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    mappings: dict[tuple, Mapping] = {}
    produced = []
    out_names = _assign_output_names(inputs)

    def worker(raw: str):
        grid, provenance = tensorfile.require_provenance(raw)
        if provenance not in mappings:
            mappings[provenance] = compose(*provenance)
        decoded = decode(grid, mappings[provenance])
        out_path = out_dir / (out_names[raw] + ".dec.grid")
        tensorfile.write_tensor(out_path, decoded)
        produced.append((raw, (out_path, decoded.shape, decoded.channels)))
        return out_path

    _, failures = _run_per_file(inputs, worker, args.jobs, args.keep_going)
    _rewrite_entries(entries, produced, args.manifest_out)
    return _finish_batch(failures, args.keep_going, len(inputs))


def _cmd_split(args) -> int:
    entries = manifest_mod.read_manifest(args.manifest)
    fractions = args.fractions.split(",")
    assigned = manifest_mod.assign_splits(
        entries, fractions, seed=args.seed, stratify=not args.no_stratify
    )
    if args.out:
        manifest_mod.write_manifest(args.out, assigned)
    else:
        manifest_mod.write_manifest(sys.stdout, assigned)
    return EXIT_OK


def _cmd_locality(args) -> int:
    measure = _MEASURE_ALIASES.get(args.measure, args.measure)
    family = CurveFamily(args.family)
    spec = CurveSpec(family, args.dim, args.order)
    pairs = None if args.exact else args.pairs
    kwargs = dict(pairs=pairs, seed=args.seed, exact_limit=args.exact_limit)

    if measure == "curve":
        report = curve_locality(spec, **kwargs)
    else:
        if args.target_dim is None or args.target_order is None:
            raise SfcmapError(f"--measure {args.measure} needs --target-dim and "
                              "--target-order")
        mapping = compose(spec, CurveSpec(family, args.target_dim, args.target_order))
        if measure == "composed":
            report = composed_locality(mapping, **kwargs)
        else:
            if args.k_source is None or args.k_target is None:
                raise SfcmapError("kernel measure needs --k-source and --k-target")
            kernel = KernelSpec(args.k_source, args.k_target)
            report = kernel_locality(mapping, kernel, **kwargs)

    rows = [["measure", "value", "pairs", "exact", "seed"],
            [report.measure.value, str(report.value), str(report.pairs),
             "true" if report.exact else "false",
             "" if report.seed is None else str(report.seed)]]
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerows(rows)
    if args.csv:
        with open(args.csv, "w", newline="") as handle:
            csv.writer(handle, lineterminator="\n").writerows(rows)
    return EXIT_OK


def _parse_palette(text: str) -> tuple[tuple[int, int, int], ...]:
    colors = []
    for token in text.split(","):
        token = token.strip().lstrip("#")
        if len(token) != 6:
            raise SfcmapError(f"bad color {token!r}; expected rrggbb hex")
        colors.append(tuple(int(token[k:k + 2], 16) for k in (0, 2, 4)))
    return tuple(colors)


def grid_to_image(grid, palette=DEFAULT_PALETTE) -> Image.Image:
    """Render a 2-d grid: grayscale for one channel, palette colors otherwise."""
    if grid.dim != 2:
        raise UnsupportedShape(f"can only render 2-d grids, got shape {grid.shape}")
    if grid.channels == 1:
        plane = grid.values[0]
        if grid.kind is GridKind.BINARY:
            pixels = plane * np.uint8(255)
        else:
            low, high = float(plane.min()), float(plane.max())
            span = high - low
            if span == 0:
                pixels = np.zeros(plane.shape, dtype=np.uint8)
            else:
                pixels = np.round((plane - low) / span * 255).astype(np.uint8)
        return Image.fromarray(pixels, mode="L")
    if grid.kind is not GridKind.BINARY:
        raise UnsupportedShape("multi-channel scalar grids have no color rendering")
    if grid.channels > len(palette):
        raise UnsupportedShape(
            f"{grid.channels} channels but only {len(palette)} palette colors"
        )
    rgb = np.zeros(grid.shape + (3,), dtype=np.uint8)
    for channel in range(grid.channels):
        rgb[grid.values[channel] != 0] = palette[channel]
    return Image.fromarray(rgb, mode="RGB")


def _cmd_export_png(args) -> int:
    grid, _ = tensorfile.read_tensor(args.input)
    palette = DEFAULT_PALETTE if args.channel_colors is None \
        else _parse_palette(args.channel_colors)
    image = grid_to_image(grid, palette)
    image.save(args.out, format="PNG")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except CapacityExceeded as exc:
        print(f"sfcmap: {exc} (try sampled mode via --pairs)", file=sys.stderr)
        return EXIT_CAPACITY
    except (SfcmapError, OSError, ValueError) as exc:
        print(f"sfcmap: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
