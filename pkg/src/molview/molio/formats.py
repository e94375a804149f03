"""Format identification from filename extension and content sniffing."""

from __future__ import annotations

import enum
import struct

from ..errors import UnknownFormat


class FormatId(enum.Enum):
    PDB = "pdb"
    MMCIF = "mmcif"
    GRO = "gro"
    MOL2 = "mol2"
    XYZ = "xyz"
    DCD = "dcd"
    XTC = "xtc"
    ARC = "arc"


STRUCTURE_FORMATS = {FormatId.PDB, FormatId.MMCIF, FormatId.GRO, FormatId.MOL2, FormatId.XYZ}
TRAJECTORY_FORMATS = {FormatId.DCD, FormatId.XTC, FormatId.ARC}

_EXTENSIONS = {
    "pdb": FormatId.PDB, "ent": FormatId.PDB,
    "cif": FormatId.MMCIF, "mmcif": FormatId.MMCIF,
    "gro": FormatId.GRO,
    "mol2": FormatId.MOL2,
    "xyz": FormatId.XYZ,
    "dcd": FormatId.DCD,
    "xtc": FormatId.XTC,
    "arc": FormatId.ARC,
}

_PDB_KEYWORDS = (b"HEADER", b"ATOM  ", b"HETATM", b"COMPND", b"REMARK", b"CRYST1", b"MODEL ")


def detect_format(filename: str, head: bytes = b"") -> FormatId:
    """Classify by extension first, then by the first 512 bytes of content."""
    ext = filename.rsplit(".", 1)[-1].lower() if "." in filename else ""
    if ext in _EXTENSIONS:
        return _EXTENSIONS[ext]
    fmt = sniff_content(head[:512])
    if fmt is None:
        raise UnknownFormat(f"cannot identify format of {filename!r}")
    return fmt


def sniff_content(head: bytes) -> FormatId | None:
    if not head:
        return None
    if len(head) >= 8:
        for endian in ("<", ">"):
            reclen, = struct.unpack(endian + "i", head[:4])
            if reclen == 84 and head[4:8] == b"CORD":
                return FormatId.DCD
    if len(head) >= 4 and struct.unpack(">i", head[:4])[0] == 1995:
        return FormatId.XTC
    text = head.decode("utf-8", errors="replace")
    stripped = text.lstrip()
    if stripped.startswith("data_") or "\ndata_" in text:
        return FormatId.MMCIF
    if "@<TRIPOS>" in text:
        return FormatId.MOL2
    for line in text.splitlines():
        if line[:6] in [k.decode() for k in _PDB_KEYWORDS]:
            return FormatId.PDB
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if lines:
        first = lines[0].split()
        if first and first[0].isdigit():
            # bare integer first line: XYZ; integer plus title with
            # numbered/typed atom lines: Tinker archive
            if len(lines) >= 2:
                second = lines[1].split()
                if len(second) >= 6 and second[0].isdigit():
                    return FormatId.ARC
            return FormatId.XYZ
    return None
