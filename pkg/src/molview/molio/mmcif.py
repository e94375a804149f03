"""mmCIF reader and writer.

Only the atom_site category is interpreted; everything else is skipped.
The row tokenizer has a fast whitespace-split path and falls back to a
quote-aware scanner only for rows whose token count disagrees with the
header, which keeps million-row files quick to load.
"""

from __future__ import annotations

import numpy as np

from ..errors import MissingColumn, ParseError
from .chem import normalize_element
from .molecule import Molecule, TrajectoryFrame

REQUIRED_COLUMNS = (
    "group_PDB", "id", "type_symbol", "label_atom_id", "label_comp_id",
    "label_asym_id", "label_seq_id", "Cartn_x", "Cartn_y", "Cartn_z",
)


def parse_mmcif(data: bytes, name: str = "") -> Molecule:
    text = data.decode("utf-8", errors="replace")
    lines = text.splitlines()

    header, rows, first_row_line = _find_atom_site(lines)
    col = {c: header.index(c) for c in header}
    missing = [c for c in REQUIRED_COLUMNS if c not in col]
    if missing:
        raise MissingColumn(f"atom_site missing column(s): {', '.join(missing)}",
                            offset=first_row_line)

    ncols = len(header)
    table: list[list[str]] = []
    for off, raw in rows:
        toks = raw.split()
        if len(toks) != ncols:
            toks = _tokenize_quoted(raw)
            if len(toks) != ncols:
                raise ParseError(
                    f"atom_site row has {len(toks)} values, expected {ncols}",
                    offset=off,
                )
        table.append(toks)
    if not table:
        raise ParseError("empty atom_site loop", offset=first_row_line)

    cols = list(zip(*table))

    def get(colname):
        return cols[col[colname]]

    try:
        coords = np.column_stack([
            np.asarray(get("Cartn_x"), dtype=np.float64),
            np.asarray(get("Cartn_y"), dtype=np.float64),
            np.asarray(get("Cartn_z"), dtype=np.float64),
        ])
    except ValueError as exc:
        raise ParseError(f"bad Cartn_* value: {exc}", offset=first_row_line) from None

    elements = [normalize_element(_unquote(v)) for v in get("type_symbol")]
    atom_names = [_unquote(v) for v in get("label_atom_id")]
    res_names = [_unquote(v) for v in get("label_comp_id")]
    chain_ids = [_unquote(v) for v in get("label_asym_id")]

    seq_raw = get("label_seq_id")
    auth_seq = cols[col["auth_seq_id"]] if "auth_seq_id" in col else None
    res_seqs = np.empty(len(seq_raw), dtype=np.int64)
    for i, v in enumerate(seq_raw):
        if v not in (".", "?"):
            res_seqs[i] = int(v)
        elif auth_seq is not None and auth_seq[i] not in (".", "?"):
            res_seqs[i] = int(auth_seq[i])
        else:
            res_seqs[i] = 0

    if "pdbx_PDB_ins_code" in col:
        icodes = ["" if v in (".", "?") else _unquote(v) for v in get("pdbx_PDB_ins_code")]
    else:
        icodes = [""] * len(table)

    if "pdbx_PDB_model_num" in col:
        models = np.asarray(get("pdbx_PDB_model_num"), dtype=np.int64)
    else:
        models = np.ones(len(table), dtype=np.int64)

    first_model = models[0]
    base = models == first_model
    idx = np.flatnonzero(base)
    mol = Molecule(
        coords[idx],
        [elements[i] for i in idx],
        [atom_names[i] for i in idx],
        [chain_ids[i] for i in idx],
        res_seqs[idx],
        [res_names[i] for i in idx],
        [icodes[i] for i in idx],
        name=name,
    )
    if not base.all():
        for m in np.unique(models[~base]):
            sub = coords[models == m]
            if len(sub) == mol.n_atoms:
                mol.extra_frames.append(TrajectoryFrame(sub))
    return mol


def write_mmcif(mol: Molecule, block_name: str = "molview") -> bytes:
    out = [f"data_{block_name or 'molview'}", "#", "loop_"]
    columns = [
        "group_PDB", "id", "type_symbol", "label_atom_id", "label_comp_id",
        "label_asym_id", "label_seq_id", "pdbx_PDB_ins_code",
        "Cartn_x", "Cartn_y", "Cartn_z", "pdbx_PDB_model_num",
    ]
    out.extend(f"_atom_site.{c}" for c in columns)
    serial = 1
    for frame in range(mol.frame_count):
        coords = mol.positions_for_frame(frame)
        for i in range(mol.n_atoms):
            x, y, z = coords[i]
            out.append(
                "ATOM %d %s %s %s %s %d %s %.3f %.3f %.3f %d"
                % (
                    serial,
                    _quote_if_needed(str(mol.elements[i])),
                    _quote_if_needed(str(mol.names[i])),
                    _quote_if_needed(str(mol.res_names[i])),
                    _quote_if_needed(str(mol.chain_ids[i])),
                    int(mol.res_seqs[i]),
                    _quote_if_needed(str(mol.res_icodes[i])) if str(mol.res_icodes[i]) else ".",
                    x, y, z,
                    frame + 1,
                )
            )
            serial += 1
    out.append("#")
    return ("\n".join(out) + "\n").encode()


def _find_atom_site(lines):
    """Locate the atom_site loop; returns (header, [(lineno, row)], first_lineno)."""
    header: list[str] = []
    rows: list[tuple[int, str]] = []
    state = "scan"
    first_row_line = 0
    for no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if state == "scan":
            if line == "loop_":
                state = "loop_header"
                header = []
        elif state == "loop_header":
            if line.startswith("_atom_site."):
                header.append(line.split(".", 1)[1].split()[0])
            elif line.startswith("_"):
                if header:
                    # a different category snuck in; not the loop we want
                    state = "scan"
                    header = []
            elif header:
                state = "rows"
                first_row_line = no
                if line and not line.startswith("#"):
                    rows.append((no, raw))
            else:
                state = "scan"
        elif state == "rows":
            if not line or line.startswith(("#", "loop_", "_", "data_")):
                break
            rows.append((no, raw))
    if not header:
        raise ParseError("no atom_site loop found", offset=1)
    return header, rows, first_row_line


def _tokenize_quoted(line: str) -> list[str]:
    toks = []
    i, n = 0, len(line)
    while i < n:
        while i < n and line[i] in " \t":
            i += 1
        if i >= n:
            break
        if line[i] in "'\"":
            q = line[i]
            j = i + 1
            while j < n:
                if line[j] == q and (j + 1 >= n or line[j + 1] in " \t"):
                    break
                j += 1
            toks.append(line[i + 1:j])
            i = j + 1
        else:
            j = i
            while j < n and line[j] not in " \t":
                j += 1
            toks.append(line[i:j])
            i = j
    return toks


def _unquote(tok: str) -> str:
    if len(tok) >= 2 and tok[0] == tok[-1] and tok[0] in "'\"":
        return tok[1:-1]
    return tok


def _quote_if_needed(value: str) -> str:
    if value == "":
        return "."
    if any(c in value for c in " '\""):
        return '"' + value + '"' if '"' not in value else "'" + value + "'"
    return value
