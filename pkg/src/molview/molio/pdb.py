"""PDB format reader and writer.

Reading keeps the first location of alternate-conformer atoms (altloc blank
or 'A'). Multi-MODEL files load model 1 as the base coordinates and later
models as extra frames when their atom counts match. Serials and residue
numbers wider than their columns are read and written as hybrid-36.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParseError
from . import hybrid36
from .chem import element_from_name, normalize_element
from .molecule import Molecule, TrajectoryFrame


def parse_pdb(data: bytes, name: str = "") -> Molecule:
    text = data.decode("utf-8", errors="replace")
    xs, ys, zs = [], [], []
    names, elements, chain_ids, res_seqs, res_names, icodes = [], [], [], [], [], []
    serial_to_index: dict[int, int] = {}
    conect_pairs: list[tuple[int, int]] = []
    model_frames: list[np.ndarray] = []
    cur_model_coords: list[list[float]] = []
    in_first_model = True
    seen_model = False

    for lineno, line in enumerate(text.splitlines(), start=1):
        rec = line[:6]
        if rec in ("ATOM  ", "HETATM"):
            altloc = line[16:17]
            if altloc not in (" ", "", "A"):
                continue
            try:
                x = float(line[30:38])
                y = float(line[38:46])
                z = float(line[46:54])
            except ValueError as exc:
                raise ParseError(f"bad coordinates: {exc}", offset=lineno) from None
            if not in_first_model:
                cur_model_coords.append([x, y, z])
                continue
            raw_name = line[12:16]
            resname = line[17:20].strip()
            element = line[76:78].strip() if len(line) >= 77 else ""
            if element and element[0].isalpha():
                element = normalize_element(element)
            else:
                element = element_from_name(raw_name, resname)
            try:
                serial = hybrid36.decode(line[6:11])
            except ValueError:
                serial = len(xs) + 1
            serial_to_index[serial] = len(xs)
            xs.append(x)
            ys.append(y)
            zs.append(z)
            names.append(raw_name.strip())
            elements.append(element)
            chain_ids.append(line[21:22].strip() or "A")
            try:
                res_seqs.append(hybrid36.decode(line[22:26]))
            except ValueError:
                res_seqs.append(0)
            res_names.append(resname)
            icodes.append(line[26:27].strip())
        elif rec == "MODEL ":
            if seen_model:
                in_first_model = False
                if cur_model_coords:
                    model_frames.append(np.array(cur_model_coords))
                    cur_model_coords = []
            seen_model = True
        elif rec == "ENDMDL":
            if not in_first_model and cur_model_coords:
                model_frames.append(np.array(cur_model_coords))
                cur_model_coords = []
            in_first_model = False if seen_model else in_first_model
        elif rec == "CONECT":
            try:
                base = hybrid36.decode(line[6:11])
            except ValueError:
                continue
            for col in (11, 16, 21, 26):
                field = line[col:col + 5]
                if not field.strip():
                    continue
                try:
                    partner = hybrid36.decode(field)
                except ValueError:
                    continue
                conect_pairs.append((base, partner))

    if not xs:
        raise ParseError("no ATOM or HETATM records found", offset=1)

    coords = np.column_stack([xs, ys, zs])
    bonds = [
        (serial_to_index[a], serial_to_index[b])
        for a, b in conect_pairs
        if a in serial_to_index and b in serial_to_index
    ]
    mol = Molecule(
        coords, elements, names, chain_ids, res_seqs, res_names, icodes,
        bonds=np.array(bonds, dtype=np.int64) if bonds else None, name=name,
    )
    if cur_model_coords:
        model_frames.append(np.array(cur_model_coords))
    for frame in model_frames:
        if len(frame) == mol.n_atoms:
            mol.extra_frames.append(TrajectoryFrame(frame))
    return mol


def write_pdb(mol: Molecule) -> bytes:
    lines: list[str] = []
    multi = mol.frame_count > 1
    for frame in range(mol.frame_count):
        if multi:
            lines.append(f"MODEL     {frame + 1:4d}")
        _write_model(lines, mol, mol.positions_for_frame(frame))
        if multi:
            lines.append("ENDMDL")
    for i, j in mol.bonds:
        lines.append(
            "CONECT" + hybrid36.encode(5, int(i) + 1) + hybrid36.encode(5, int(j) + 1)
        )
    lines.append("END")
    return ("\n".join(lines) + "\n").encode()


def _write_model(lines: list[str], mol: Molecule, coords: np.ndarray):
    last_chain = None
    for i in range(mol.n_atoms):
        chain = str(mol.chain_ids[i])[:1] or "A"
        if last_chain is not None and chain != last_chain:
            lines.append("TER")
        last_chain = chain
        name = str(mol.names[i])
        element = str(mol.elements[i])
        # single-letter elements start at column 14 unless the name is 4 wide
        if len(name) >= 4 or len(element) == 2:
            field_name = name[:4].ljust(4)
        else:
            field_name = (" " + name).ljust(4)
        x, y, z = coords[i]
        lines.append(
            "ATOM  %s %s %s %s%s%s   %8.3f%8.3f%8.3f%6.2f%6.2f          %2s"
            % (
                hybrid36.encode(5, i + 1),
                field_name,
                str(mol.res_names[i])[:3].rjust(3),
                chain,
                hybrid36.encode(4, int(mol.res_seqs[i])),
                (str(mol.res_icodes[i]) or " ")[:1],
                x, y, z, 1.0, 0.0,
                element[:2].rjust(2),
            )
        )
