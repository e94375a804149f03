"""Chemical lookup tables for parsing and bond perception."""

from __future__ import annotations

# Single-bond covalent radii (Angstrom). Unknown elements fall back to
# COVALENT_DEFAULT; the perception tolerance is BOND_TOLERANCE on the sum.
COVALENT_RADII = {
    "H": 0.31, "He": 0.28,
    "Li": 1.28, "Be": 0.96, "B": 0.84, "C": 0.76, "N": 0.71, "O": 0.66,
    "F": 0.57, "Ne": 0.58,
    "Na": 1.66, "Mg": 1.41, "Al": 1.21, "Si": 1.11, "P": 1.07, "S": 1.05,
    "Cl": 1.02, "Ar": 1.06,
    "K": 2.03, "Ca": 1.76, "Ti": 1.60, "V": 1.53, "Cr": 1.39, "Mn": 1.39,
    "Fe": 1.32, "Co": 1.26, "Ni": 1.24, "Cu": 1.32, "Zn": 1.22,
    "Ga": 1.22, "Ge": 1.20, "As": 1.19, "Se": 1.20, "Br": 1.20, "Kr": 1.16,
    "Rb": 2.20, "Sr": 1.95, "Ag": 1.45, "Cd": 1.44,
    "In": 1.42, "Sn": 1.39, "Sb": 1.39, "Te": 1.38, "I": 1.39, "Xe": 1.40,
    "Cs": 2.44, "Ba": 2.15, "Pt": 1.36, "Au": 1.36, "Hg": 1.32, "Pb": 1.46,
}
COVALENT_DEFAULT = 0.77
BOND_TOLERANCE = 0.4   # added to the radius sum
BOND_MIN_DIST = 0.4    # below this atoms are considered overlapping, not bonded

# Standard amino acids, three-letter to one-letter.
AMINO_THREE_TO_ONE = {
    "ALA": "A", "ARG": "R", "ASN": "N", "ASP": "D", "CYS": "C",
    "GLN": "Q", "GLU": "E", "GLY": "G", "HIS": "H", "ILE": "I",
    "LEU": "L", "LYS": "K", "MET": "M", "PHE": "F", "PRO": "P",
    "SER": "S", "THR": "T", "TRP": "W", "TYR": "Y", "VAL": "V",
    "MSE": "M", "SEC": "U", "PYL": "O",
}

STANDARD_RESIDUES = set(AMINO_THREE_TO_ONE) | {
    "HOH", "WAT", "DA", "DC", "DG", "DT", "A", "C", "G", "U",
}

KNOWN_ELEMENTS = set(COVALENT_RADII)


def covalent_radius(element: str) -> float:
    return COVALENT_RADII.get(element, COVALENT_DEFAULT)


def element_from_name(name: str, resname: str = "") -> str:
    """Guess an element symbol from an atom name.

    Inside standard residues names like "CA" mean carbon-alpha, so the first
    letter wins; elsewhere a two-letter table match is preferred ("CL", "Fe").
    """
    s = name.strip()
    while s and not s[0].isalpha():
        s = s[1:]
    if not s:
        return ""
    if resname.strip().upper() in STANDARD_RESIDUES:
        return s[0].upper()
    two = (s[0].upper() + s[1].lower()) if len(s) >= 2 and s[1].isalpha() else ""
    if two in KNOWN_ELEMENTS:
        return two
    return s[0].upper()


def normalize_element(symbol: str) -> str:
    """Canonical capitalization for an element symbol ("FE" -> "Fe")."""
    s = symbol.strip()
    if not s:
        return s
    return s[0].upper() + s[1:].lower()
