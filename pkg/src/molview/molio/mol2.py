"""Tripos MOL2 reader (structure + explicit bonds)."""

from __future__ import annotations

import numpy as np

from ..errors import ParseError
from .chem import KNOWN_ELEMENTS, normalize_element
from .molecule import Molecule


def parse_mol2(data: bytes, name: str = "") -> Molecule:
    lines = data.decode("utf-8", errors="replace").splitlines()
    section = None
    mol_name = name
    atoms: list[tuple] = []
    bonds: list[tuple[int, int]] = []
    id_to_index: dict[int, int] = {}
    molecule_header_lines = 0

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if line.startswith("@<TRIPOS>"):
            section = line[9:].upper()
            molecule_header_lines = 0
            continue
        if not line or line.startswith("#"):
            continue
        if section == "MOLECULE":
            molecule_header_lines += 1
            if molecule_header_lines == 1 and not mol_name:
                mol_name = line
        elif section == "ATOM":
            parts = line.split()
            if len(parts) < 6:
                raise ParseError("short @<TRIPOS>ATOM line", offset=lineno)
            try:
                atom_id = int(parts[0])
                x, y, z = float(parts[2]), float(parts[3]), float(parts[4])
            except ValueError as exc:
                raise ParseError(f"bad @<TRIPOS>ATOM line: {exc}", offset=lineno) from None
            atom_type = parts[5]
            subst_id = int(parts[6]) if len(parts) > 6 else 1
            subst_name = parts[7] if len(parts) > 7 else "UNK"
            id_to_index[atom_id] = len(atoms)
            atoms.append((x, y, z, parts[1], _element_from_type(atom_type),
                          subst_id, subst_name))
        elif section == "BOND":
            parts = line.split()
            if len(parts) < 3:
                raise ParseError("short @<TRIPOS>BOND line", offset=lineno)
            try:
                a, b = int(parts[1]), int(parts[2])
            except ValueError as exc:
                raise ParseError(f"bad @<TRIPOS>BOND line: {exc}", offset=lineno) from None
            bonds.append((a, b))

    if not atoms:
        raise ParseError("no @<TRIPOS>ATOM section", offset=1)

    coords = np.array([(a[0], a[1], a[2]) for a in atoms])
    pairs = []
    for a, b in bonds:
        if a not in id_to_index or b not in id_to_index:
            raise ParseError(f"bond references unknown atom id {a} or {b}")
        pairs.append((id_to_index[a], id_to_index[b]))
    # residue names may carry a trailing number ("ALA1"); keep as-is
    return Molecule(
        coords,
        [a[4] for a in atoms],
        [a[3] for a in atoms],
        ["A"] * len(atoms),
        [a[5] for a in atoms],
        [a[6] for a in atoms],
        bonds=np.array(pairs, dtype=np.int64) if pairs else None,
        name=mol_name,
    )


def _element_from_type(sybyl_type: str) -> str:
    base = sybyl_type.split(".", 1)[0]
    el = normalize_element(base)
    if el in KNOWN_ELEMENTS:
        return el
    return el[:1].upper()
