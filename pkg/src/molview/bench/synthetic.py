"""Deterministic synthetic systems standing in for large benchmark files."""

from __future__ import annotations

import numpy as np

from ..molio.molecule import Molecule

ELEMENT_CYCLE = ("C", "N", "O", "S")
DENSITY = 0.01       # atoms per cubic Angstrom for the globular blob


def generate_synthetic(n_atoms: int, style: str = "globular",
                       seed: int = 42) -> Molecule:
    """Seeded atom cloud: a gaussian blob or a cell-like shell plus blobs."""
    if n_atoms < 1:
        raise ValueError("need at least one atom")
    rng = np.random.default_rng(seed)
    if style == "globular":
        coords = _blob(rng, n_atoms)
    elif style == "cell_like":
        n_shell = max(int(0.6 * n_atoms), 1)
        n_inner = n_atoms - n_shell
        radius = _blob_radius(n_atoms) * 1.5
        shell = _shell(rng, n_shell, radius)
        parts = [shell]
        remaining = n_inner
        while remaining > 0:
            k = min(remaining, max(n_inner // 8, 1))
            center = rng.uniform(-0.5, 0.5, 3) * radius
            parts.append(_blob(rng, k, scale=0.25) + center)
            remaining -= k
        coords = np.vstack(parts)[:n_atoms]
    else:
        raise ValueError(f"unknown synthetic style {style!r}")

    if n_atoms == 1:
        coords = np.zeros((1, 3))
    elements = np.array(ELEMENT_CYCLE)[np.arange(n_atoms) % len(ELEMENT_CYCLE)]
    return Molecule(coords, elements, name=f"synthetic-{style}-{n_atoms}")


def _blob_radius(n_atoms: int) -> float:
    return (3.0 * n_atoms / (4.0 * np.pi * DENSITY)) ** (1.0 / 3.0)


def _blob(rng, n_atoms: int, scale: float = 1.0) -> np.ndarray:
    sigma = _blob_radius(n_atoms) * scale / 2.0
    return rng.normal(0.0, max(sigma, 1.0), (n_atoms, 3))


def _shell(rng, n_atoms: int, radius: float) -> np.ndarray:
    v = rng.normal(size=(n_atoms, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    r = radius * (1.0 + rng.normal(0.0, 0.015, n_atoms))
    return v * r[:, None]
