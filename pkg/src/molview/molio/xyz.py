"""Plain XYZ reader/writer; consecutive equal-size blocks become frames."""

from __future__ import annotations

import numpy as np

from ..errors import ParseError
from .chem import normalize_element
from .molecule import Molecule, TrajectoryFrame


def parse_xyz(data: bytes, name: str = "") -> Molecule:
    lines = data.decode("utf-8", errors="replace").splitlines()
    pos = 0
    blocks = []
    while pos < len(lines):
        if not lines[pos].strip():
            pos += 1
            continue
        try:
            natoms = int(lines[pos].split()[0])
        except ValueError:
            raise ParseError("expected atom count", offset=pos + 1) from None
        if pos + 2 + natoms > len(lines):
            raise ParseError("truncated XYZ block", offset=pos + 1)
        comment = lines[pos + 1].strip()
        elements, coords = [], np.empty((natoms, 3), dtype=np.float64)
        for i in range(natoms):
            parts = lines[pos + 2 + i].split()
            if len(parts) < 4:
                raise ParseError("short XYZ atom line", offset=pos + 3 + i)
            elements.append(normalize_element(parts[0]))
            try:
                coords[i] = [float(parts[1]), float(parts[2]), float(parts[3])]
            except ValueError as exc:
                raise ParseError(f"bad coordinate: {exc}", offset=pos + 3 + i) from None
        blocks.append((comment, elements, coords))
        pos += 2 + natoms

    if not blocks:
        raise ParseError("empty XYZ file", offset=1)
    comment, elements, coords = blocks[0]
    mol = Molecule(coords, elements, name=name or comment)
    for _, el, extra in blocks[1:]:
        if len(extra) == mol.n_atoms:
            mol.extra_frames.append(TrajectoryFrame(extra))
    return mol


def write_xyz(mol: Molecule) -> bytes:
    out = []
    for frame in range(mol.frame_count):
        coords = mol.positions_for_frame(frame)
        out.append(str(mol.n_atoms))
        out.append(mol.name or "written by molview")
        for i in range(mol.n_atoms):
            out.append("%-3s %14.6f %14.6f %14.6f"
                       % (str(mol.elements[i]), *coords[i]))
    return ("\n".join(out) + "\n").encode()
