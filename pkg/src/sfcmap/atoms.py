"""Fixed-column atom record parsing and the van der Waals radius table.

The parser reads protein-structure text in the classic fixed-column layout:

    columns (1-based)   field
    1-6                 record name ("ATOM", "HETATM", ...)
    7-11                atom serial number
    13-16               atom name
    18-20               residue name
    22                  chain identifier
    31-38, 39-46, 47-54 x, y, z in angstroms (8.3 fixed point)
    77-78               element symbol (optional; derived from the atom
                        name when blank or absent)

Only ATOM records are parsed by default; HETATM records are included on
request.  Everything else is ignored.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import IO

from .errors import MalformedRecord

# Van der Waals radii in angstroms (Bondi's consensus values, with a few
# common additions), keyed by upper-case element symbol.
VDW_RADII: dict[str, float] = {
    "H": 1.20,
    "C": 1.70,
    "N": 1.55,
    "O": 1.52,
    "S": 1.80,
    "P": 1.80,
    "F": 1.47,
    "CL": 1.75,
    "BR": 1.85,
    "I": 1.98,
    "SE": 1.90,
    "NA": 2.27,
    "MG": 1.73,
    "K": 2.75,
    "CA": 2.31,
    "ZN": 1.39,
    "FE": 2.04,
}


@dataclass(frozen=True)
class AtomRecord:
    """One atom: identity, position and residue classification."""

    serial: int
    atom_name: str
    residue: str
    chain: str
    position: tuple[float, float, float]
    element: str


def _derive_element(atom_name: str, first_column: str) -> str:
    """Guess the element from an atom name when no element column exists.

    Two-letter element names (FE, ZN, ...) start in the first column of the
    atom-name field; one-letter elements are indented, so ``CA`` there means
    an alpha carbon, not calcium.
    """
    letters = "".join(ch for ch in atom_name if ch.isalpha())
    if not letters:
        return ""
    if first_column != " " and letters[:2].upper() in VDW_RADII:
        return letters[:2].upper()
    return letters[0].upper()


def parse_atoms(source: str | IO[str], *, include_hetatm: bool = False) -> list[AtomRecord]:
    """Parse fixed-column atom records from a string or text stream.

    Returns one record per ATOM line (plus HETATM when requested) in file
    order.  Lines of any other record type are ignored.  An ATOM line whose
    fixed fields cannot be parsed raises MalformedRecord carrying the
    1-based line number.
    """
    stream = io.StringIO(source) if isinstance(source, str) else source
    records: list[AtomRecord] = []
    for line_number, raw in enumerate(stream, start=1):
        line = raw.rstrip("\n")
        name = line[0:6].strip()
        if name != "ATOM" and not (include_hetatm and name == "HETATM"):
            continue
        if len(line) < 54:
            raise MalformedRecord("record too short to hold coordinates", line_number)
        try:
            serial = int(line[6:11])
        except ValueError:
            raise MalformedRecord(f"bad serial field {line[6:11]!r}", line_number)
        try:
            x = float(line[30:38])
            y = float(line[38:46])
            z = float(line[46:54])
        except ValueError:
            raise MalformedRecord(
                f"bad coordinate fields {line[30:54]!r}", line_number
            )
        atom_name = line[12:16].strip()
        residue = line[17:20].strip()
        chain = line[21:22].strip()
        element = line[76:78].strip().upper() if len(line) >= 78 else ""
        if not element:
            element = _derive_element(atom_name, line[12:13] or " ")
        records.append(
            AtomRecord(serial, atom_name, residue, chain, (x, y, z), element)
        )
    return records


def format_atom_line(record: AtomRecord, resseq: int = 1) -> str:
    """Render a record back to one fixed-column ATOM line (for fixtures and
    round-trip checks, not a general writer)."""
    name = record.atom_name
    # One-letter-element atom names are indented one column.
    padded = name.ljust(4) if len(name) >= 4 or len(record.element) == 2 else f" {name}".ljust(4)
    x, y, z = record.position
    return (
        f"ATOM  {record.serial:>5d} {padded:<4.4s} {record.residue:>3.3s} "
        f"{record.chain:1.1s}{resseq:>4d}    {x:8.3f}{y:8.3f}{z:8.3f}"
        f"  1.00  0.00          {record.element:>2.2s}"
    )
