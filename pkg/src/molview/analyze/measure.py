"""Distance and angle measurements."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateAngle

MIN_ARM = 1e-9


def measure_distance(mol, i: int, j: int) -> float:
    """Euclidean distance between two atoms in Angstrom."""
    if i == j:
        raise ValueError("distance needs two distinct atoms")
    return float(np.linalg.norm(mol.coords[i] - mol.coords[j]))


def measure_angle(mol, i: int, j: int, k: int) -> float:
    """Angle i-j-k in degrees; j is the vertex."""
    if len({i, j, k}) != 3:
        raise ValueError("angle needs three distinct atoms")
    a = mol.coords[i] - mol.coords[j]
    b = mol.coords[k] - mol.coords[j]
    la, lb = np.linalg.norm(a), np.linalg.norm(b)
    if la < MIN_ARM or lb < MIN_ARM:
        raise DegenerateAngle("angle arm shorter than 1e-9 A")
    cosv = np.clip(np.dot(a, b) / (la * lb), -1.0, 1.0)
    return float(np.degrees(np.arccos(cosv)))
