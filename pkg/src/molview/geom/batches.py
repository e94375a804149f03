"""Impostor primitive batches and their builders.

Batches are structure-of-arrays buffers consumed directly by the rasterizer
and by the wire encoder. Builders are pure functions of (molecule, selection,
spec) and permutation-equivariant in the selection order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# CPK-style element colors
ELEMENT_COLORS = {
    "H": (255, 255, 255), "C": (144, 144, 144), "N": (48, 80, 248),
    "O": (255, 13, 13), "S": (255, 255, 48), "P": (255, 128, 0),
    "F": (144, 224, 80), "Cl": (31, 240, 31), "Br": (166, 41, 41),
    "I": (148, 0, 148), "Fe": (224, 102, 51), "Mg": (138, 255, 0),
    "Ca": (61, 255, 0), "Zn": (125, 128, 176), "Na": (171, 92, 242),
    "K": (143, 64, 212), "Se": (255, 161, 0),
}
DEFAULT_ELEMENT_COLOR = (255, 105, 180)

CHAIN_PALETTE = np.array([
    (141, 211, 199), (255, 255, 179), (190, 186, 218), (251, 128, 114),
    (128, 177, 211), (253, 180, 98), (179, 222, 105), (252, 205, 229),
    (217, 217, 217), (188, 128, 189),
], dtype=np.uint8)


@dataclass
class SphereBatch:
    centers: np.ndarray                   # (n, 3)
    radii: np.ndarray                     # (n,)
    colors: np.ndarray                    # (n, 4) uint8
    material_ids: np.ndarray | None = None
    object_id: int = 0

    def __post_init__(self):
        self.centers = np.asarray(self.centers, dtype=np.float64).reshape(-1, 3)
        self.radii = np.asarray(self.radii, dtype=np.float64).reshape(-1)
        self.colors = np.asarray(self.colors, dtype=np.uint8).reshape(-1, 4)
        if self.material_ids is None:
            self.material_ids = np.ones(len(self.centers), dtype=np.uint16)
        n = len(self.centers)
        if not (len(self.radii) == len(self.colors) == len(self.material_ids) == n):
            raise ValueError("sphere batch arrays disagree in length")
        if n and self.radii.min() <= 0:
            raise ValueError("sphere radii must be positive")

    def __len__(self):
        return len(self.centers)


@dataclass
class CylinderBatch:
    p0: np.ndarray                        # (n, 3)
    p1: np.ndarray                        # (n, 3)
    radius: float
    colors: np.ndarray                    # (n, 2, 4) uint8, one per endpoint
    material_ids: np.ndarray | None = None
    object_id: int = 0

    def __post_init__(self):
        self.p0 = np.asarray(self.p0, dtype=np.float64).reshape(-1, 3)
        self.p1 = np.asarray(self.p1, dtype=np.float64).reshape(-1, 3)
        self.colors = np.asarray(self.colors, dtype=np.uint8).reshape(-1, 2, 4)
        if self.material_ids is None:
            self.material_ids = np.ones(len(self.p0), dtype=np.uint16)
        n = len(self.p0)
        if not (len(self.p1) == len(self.colors) == len(self.material_ids) == n):
            raise ValueError("cylinder batch arrays disagree in length")
        if self.radius <= 0:
            raise ValueError("cylinder radius must be positive")
        if n and np.any(np.all(self.p0 == self.p1, axis=1)):
            raise ValueError("degenerate cylinder (identical endpoints)")

    def __len__(self):
        return len(self.p0)


def atom_colors(mol, indices: np.ndarray, spec) -> np.ndarray:
    """Resolve per-atom RGBA for a selection under the spec's color mode."""
    n = len(indices)
    out = np.empty((n, 4), dtype=np.uint8)
    out[:, 3] = 255
    mode = getattr(spec, "color_mode", "element")
    if mode == "flat":
        out[:, :3] = np.asarray(getattr(spec, "flat_rgb", (200, 200, 200)), dtype=np.uint8)
    elif mode == "chain":
        chain_idx = mol.atom_chain[indices] % len(CHAIN_PALETTE)
        out[:, :3] = CHAIN_PALETTE[chain_idx]
    else:
        cache: dict[str, tuple] = {}
        els = mol.elements[indices]
        for i, el in enumerate(els):
            c = cache.get(el)
            if c is None:
                c = ELEMENT_COLORS.get(str(el), DEFAULT_ELEMENT_COLOR)
                cache[el] = c
            out[i, :3] = c
    return out


def _indices(sel) -> np.ndarray:
    idx = getattr(sel, "atom_indices", sel)
    return np.asarray(idx, dtype=np.int64)


def build_vdw_batch(mol, sel, spec, object_id: int = 0) -> SphereBatch:
    """Van der Waals spheres at table radii."""
    idx = _indices(sel)
    return SphereBatch(
        mol.coords[idx], mol.radii[idx], atom_colors(mol, idx, spec),
        object_id=object_id,
    )


def build_sas_batch(mol, sel, spec, object_id: int = 0) -> SphereBatch:
    """Solvent accessible surface as probe-inflated sphere impostors."""
    idx = _indices(sel)
    probe = float(getattr(spec, "probe_radius", 1.4))
    return SphereBatch(
        mol.coords[idx], mol.radii[idx] + probe, atom_colors(mol, idx, spec),
        object_id=object_id,
    )


def build_stick_batches(mol, sel, spec, object_id: int = 0,
                        ball_and_stick: bool = False):
    """Cylinders per fully-selected bond plus joint/ball spheres.

    Bonds crossing the selection boundary are dropped (both endpoints must be
    selected). Cylinder endpoint colors follow the two atoms so the renderer
    can split the color at the midpoint.
    """
    idx = _indices(sel)
    stick_r = float(getattr(spec, "stick_radius", 0.15))
    colors = atom_colors(mol, idx, spec)

    if ball_and_stick:
        scale = float(getattr(spec, "ball_scale", 0.3))
        sphere_r = mol.radii[idx] * scale
    else:
        sphere_r = np.full(len(idx), stick_r)
    spheres = SphereBatch(mol.coords[idx], sphere_r, colors, object_id=object_id)

    in_sel = np.zeros(mol.n_atoms, dtype=bool)
    in_sel[idx] = True
    color_of = np.zeros((mol.n_atoms, 4), dtype=np.uint8)
    color_of[idx] = colors
    bonds = mol.bonds
    if len(bonds):
        keep = in_sel[bonds[:, 0]] & in_sel[bonds[:, 1]]
        bonds = bonds[keep]
    if len(bonds) == 0:
        cylinders = CylinderBatch(
            np.empty((0, 3)), np.empty((0, 3)), stick_r,
            np.empty((0, 2, 4), dtype=np.uint8), object_id=object_id,
        )
    else:
        pair_colors = np.stack([color_of[bonds[:, 0]], color_of[bonds[:, 1]]], axis=1)
        cylinders = CylinderBatch(
            mol.coords[bonds[:, 0]], mol.coords[bonds[:, 1]], stick_r,
            pair_colors, object_id=object_id,
        )
    return spheres, cylinders


def split_sphere_batch(batch: SphereBatch, max_items: int):
    """Split for streaming; chunk boundaries follow primitive index order."""
    for lo in range(0, len(batch), max_items):
        hi = min(lo + max_items, len(batch))
        yield SphereBatch(
            batch.centers[lo:hi], batch.radii[lo:hi], batch.colors[lo:hi],
            batch.material_ids[lo:hi], object_id=batch.object_id,
        )


def split_cylinder_batch(batch: CylinderBatch, max_items: int):
    for lo in range(0, len(batch), max_items):
        hi = min(lo + max_items, len(batch))
        yield CylinderBatch(
            batch.p0[lo:hi], batch.p1[lo:hi], batch.radius,
            batch.colors[lo:hi], batch.material_ids[lo:hi],
            object_id=batch.object_id,
        )
