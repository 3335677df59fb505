import numpy as np
import pytest

from sfcmap import AtomRecord
from sfcmap.atoms import format_atom_line


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def atom_line(serial, name, residue, x, y, z, chain="A", element=None):
    """Build one fixed-column ATOM line for fixtures."""
    if element is None:
        element = name[0]
    return format_atom_line(
        AtomRecord(serial, name, residue, chain, (x, y, z), element)
    )


@pytest.fixture
def small_chain_text():
    """A tiny all-standard-residue chain spanning every channel category."""
    residues = ["ALA", "PHE", "SER", "ASP", "LYS", "GLY", "PRO", "TRP"]
    rng = np.random.default_rng(77)
    lines = []
    serial = 1
    for r, res in enumerate(residues):
        base = rng.normal(0.0, 6.0, 3)
        for name, elem in [("N", "N"), ("CA", "C"), ("C", "C"), ("O", "O"), ("CB", "C")]:
            offset = rng.normal(0.0, 1.0, 3)
            x, y, z = base + offset
            lines.append(atom_line(serial, name, res, x, y, z, element=elem))
            serial += 1
    return "\n".join(lines) + "\n"
