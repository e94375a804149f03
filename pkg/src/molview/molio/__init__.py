"""Molecular structure and trajectory I/O.

Public surface: format detection, structure parse/write, lazy trajectory
streams, bond perception and PDB download.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import AtomCountMismatch, ParseError, UnknownFormat
from .bonds import perceive_bonds
from .fetch import fetch_pdb
from .formats import (FormatId, STRUCTURE_FORMATS, TRAJECTORY_FORMATS,
                      detect_format, sniff_content)
from .molecule import Chain, Molecule, Residue, TrajectoryFrame

__all__ = [
    "FormatId", "Molecule", "TrajectoryFrame", "Chain", "Residue",
    "detect_format", "parse_structure", "write_structure",
    "open_trajectory", "write_trajectory", "perceive_bonds", "fetch_pdb",
    "load_file", "STRUCTURE_FORMATS", "TRAJECTORY_FORMATS",
]


def parse_structure(data: bytes, fmt: FormatId, name: str = "") -> Molecule:
    if fmt not in STRUCTURE_FORMATS:
        raise UnknownFormat(f"{fmt} is not a structure format")
    if fmt is FormatId.PDB:
        from .pdb import parse_pdb
        return parse_pdb(data, name)
    if fmt is FormatId.MMCIF:
        from .mmcif import parse_mmcif
        return parse_mmcif(data, name)
    if fmt is FormatId.GRO:
        from .gro import parse_gro
        return parse_gro(data, name)
    if fmt is FormatId.MOL2:
        from .mol2 import parse_mol2
        return parse_mol2(data, name)
    from .xyz import parse_xyz
    return parse_xyz(data, name)


def write_structure(mol: Molecule, fmt: FormatId) -> bytes:
    if fmt is FormatId.PDB:
        from .pdb import write_pdb
        return write_pdb(mol)
    if fmt is FormatId.MMCIF:
        from .mmcif import write_mmcif
        return write_mmcif(mol, mol.name)
    if fmt is FormatId.GRO:
        from .gro import write_gro
        return write_gro(mol)
    if fmt is FormatId.XYZ:
        from .xyz import write_xyz
        return write_xyz(mol)
    raise UnknownFormat(f"no writer for {fmt}")


def open_trajectory(source, fmt: FormatId, molecule: Molecule | None = None):
    """Lazy frame stream over a trajectory file.

    ``source`` may be a path or raw bytes. The returned reader is iterable
    (single consumer) and exposes ``.truncated`` after exhaustion. When a
    molecule is given, frames with a different atom count raise
    AtomCountMismatch.
    """
    if fmt not in TRAJECTORY_FORMATS:
        raise UnknownFormat(f"{fmt} is not a trajectory format")
    data = _as_bytes(source)
    if fmt is FormatId.DCD:
        from .dcd import DcdReader
        reader = DcdReader(data)
    elif fmt is FormatId.XTC:
        from .xtc import XtcReader
        reader = XtcReader(data)
    else:
        from .arc import ArcReader
        reader = ArcReader(data)
    if molecule is not None:
        return _BoundReader(reader, molecule.n_atoms)
    return reader


def write_trajectory(frames, fmt: FormatId, precision: float = 1000.0) -> bytes:
    if fmt is FormatId.DCD:
        from .dcd import write_dcd
        return write_dcd(frames)
    if fmt is FormatId.XTC:
        from .xtc import write_xtc
        return write_xtc(frames, precision=precision)
    raise UnknownFormat(f"no trajectory writer for {fmt}")


def load_file(path: str | Path, fmt: FormatId | None = None) -> Molecule:
    """Detect, parse and name a structure file in one step."""
    path = Path(path)
    data = path.read_bytes()
    if fmt is None:
        fmt = detect_format(path.name, data[:512])
    mol = parse_structure(data, fmt, name=path.stem)
    mol.source_path = str(path)
    return mol


class _BoundReader:
    def __init__(self, reader, n_atoms: int):
        self._reader = reader
        self.n_atoms = n_atoms
        self.truncated = False

    def __iter__(self):
        for frame in self._reader:
            if len(frame.positions) != self.n_atoms:
                raise AtomCountMismatch(
                    f"frame has {len(frame.positions)} atoms, molecule has {self.n_atoms}"
                )
            yield frame
        self.truncated = self._reader.truncated


def _as_bytes(source) -> bytes:
    if isinstance(source, (bytes, bytearray)):
        return bytes(source)
    if hasattr(source, "read"):
        return source.read()
    return Path(source).read_bytes()
