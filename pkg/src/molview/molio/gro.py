"""GROMACS .gro reader/writer (fixed columns, nm converted to Angstrom)."""

from __future__ import annotations

import numpy as np

from ..errors import ParseError
from .chem import element_from_name
from .molecule import Molecule

NM_TO_ANG = 10.0


def parse_gro(data: bytes, name: str = "") -> Molecule:
    lines = data.decode("utf-8", errors="replace").splitlines()
    if len(lines) < 2:
        raise ParseError("truncated .gro header", offset=1)
    try:
        natoms = int(lines[1].strip())
    except ValueError:
        raise ParseError("atom count line is not an integer", offset=2) from None
    if len(lines) < 2 + natoms:
        raise ParseError(f"expected {natoms} atom lines", offset=len(lines))

    coords = np.empty((natoms, 3), dtype=np.float64)
    names, elements, res_seqs, res_names = [], [], [], []
    for i in range(natoms):
        line = lines[2 + i]
        try:
            res_seqs.append(int(line[0:5]))
            resname = line[5:10].strip()
            atomname = line[10:15].strip()
            coords[i, 0] = float(line[20:28])
            coords[i, 1] = float(line[28:36])
            coords[i, 2] = float(line[36:44])
        except ValueError as exc:
            raise ParseError(f"bad .gro atom line: {exc}", offset=3 + i) from None
        res_names.append(resname)
        names.append(atomname)
        elements.append(element_from_name(atomname, resname))
    coords *= NM_TO_ANG
    return Molecule(
        coords, elements, names, ["A"] * natoms, res_seqs, res_names,
        name=name or lines[0].strip(),
    )


def write_gro(mol: Molecule) -> bytes:
    lines = [mol.name or "written by molview", f"{mol.n_atoms:5d}"]
    coords = mol.coords / NM_TO_ANG
    for i in range(mol.n_atoms):
        lines.append(
            "%5d%-5s%5s%5d%8.3f%8.3f%8.3f"
            % (
                int(mol.res_seqs[i]) % 100000,
                str(mol.res_names[i])[:5],
                str(mol.names[i])[:5],
                (i + 1) % 100000,
                coords[i, 0], coords[i, 1], coords[i, 2],
            )
        )
    span = (mol.coords.max(axis=0) - mol.coords.min(axis=0)) / NM_TO_ANG if mol.n_atoms else np.zeros(3)
    lines.append("%10.5f%10.5f%10.5f" % tuple(np.maximum(span, 1.0)))
    return ("\n".join(lines) + "\n").encode()
