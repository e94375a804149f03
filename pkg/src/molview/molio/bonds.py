"""Distance-based bond perception over a spatial hash grid."""

from __future__ import annotations

import numpy as np

from ..spatial import SpatialHash
from .chem import BOND_MIN_DIST, BOND_TOLERANCE, covalent_radius
from .molecule import Molecule, dedupe_bonds


def perceive_bonds(mol: Molecule) -> np.ndarray:
    """Bond pairs by covalent-radius criterion, merged with file bonds.

    Atoms i, j bond when BOND_MIN_DIST < |pi - pj| < r_cov(i) + r_cov(j) +
    BOND_TOLERANCE. H-H pairs are never bonded. Explicit bonds already on the
    molecule are kept and deduplicated against the perceived set.
    """
    n = mol.n_atoms
    if n < 2:
        return mol.bonds.copy()

    rcov = np.array([covalent_radius(str(e)) for e in mol.elements])
    max_cut = 2.0 * float(rcov.max()) + BOND_TOLERANCE
    grid = SpatialHash(mol.coords, cell_size=max_cut)
    i, j = grid.pairs_within(max_cut)
    if len(i):
        d = np.linalg.norm(mol.coords[i] - mol.coords[j], axis=1)
        cut = rcov[i] + rcov[j] + BOND_TOLERANCE
        is_h = mol.elements == "H"
        keep = (d < cut) & (d > BOND_MIN_DIST) & ~(is_h[i] & is_h[j])
        i, j = i[keep], j[keep]
    perceived = np.stack([i, j], axis=1) if len(i) else np.empty((0, 2), dtype=np.int64)
    merged = np.concatenate([mol.bonds, perceived], axis=0)
    return dedupe_bonds(merged, n)
