"""Discrete solvent-excluded-surface field.

Three steps on a uniform grid: (1) signed distance to the probe-inflated
atom spheres (the SAS) at every grid vertex, exact within a clamp band and
clamped positive far away; (2) zero crossings of that field sampled on grid
edges as a dense point set on the SAS boundary; (3) the SES value at a
vertex inside the SAS is probe_radius minus its exact distance to the
nearest boundary sample, evaluated in a narrow band, with deep interior
capped at -probe_radius. The SES is the zero level set of the result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..errors import GridTooLarge

DEFAULT_VOXEL_BUDGET = 512 ** 3


@dataclass
class SesParams:
    probe_radius: float = 1.4
    grid_spacing: float = 0.4

    def __post_init__(self):
        if self.probe_radius <= 0 or self.grid_spacing <= 0:
            raise ValueError("probe radius and grid spacing must be positive")


@dataclass
class ScalarField:
    origin: np.ndarray          # (3,) Angstrom
    spacing: float
    values: np.ndarray          # (nx, ny, nz) float32, negative inside

    def __post_init__(self):
        self.origin = np.asarray(self.origin, dtype=np.float64).reshape(3)
        self.values = np.asarray(self.values, dtype=np.float32)
        if self.values.ndim != 3 or min(self.values.shape) < 2:
            raise ValueError("field needs at least 2 samples per axis")
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")

    @property
    def dims(self):
        return self.values.shape


def sas_distance_grid(centers, radii, probe_radius, origin, dims, h, clamp):
    """min_i(|x - c_i| - (r_i + probe)) per vertex, exact within +clamp."""
    field = np.full(dims, clamp, dtype=np.float32)
    influence = radii + probe_radius + clamp
    lo_all = np.ceil((centers - influence[:, None] - origin) / h).astype(np.int64)
    hi_all = np.floor((centers + influence[:, None] - origin) / h).astype(np.int64)
    np.clip(lo_all, 0, np.array(dims) - 1, out=lo_all)
    np.clip(hi_all, 0, np.array(dims) - 1, out=hi_all)
    for c, rp, lo, hi in zip(centers, radii + probe_radius, lo_all, hi_all):
        xs = origin[0] + h * np.arange(lo[0], hi[0] + 1)
        ys = origin[1] + h * np.arange(lo[1], hi[1] + 1)
        zs = origin[2] + h * np.arange(lo[2], hi[2] + 1)
        d2 = ((xs - c[0]) ** 2)[:, None, None] \
            + ((ys - c[1]) ** 2)[None, :, None] \
            + ((zs - c[2]) ** 2)[None, None, :]
        block = field[lo[0]:hi[0] + 1, lo[1]:hi[1] + 1, lo[2]:hi[2] + 1]
        np.minimum(block, np.sqrt(d2, dtype=np.float32) - rp, out=block)
    return field


def boundary_points(field: np.ndarray, origin, h) -> np.ndarray:
    """Zero-crossing locations of the field along grid edges, world coords."""
    pts = []
    for axis in range(3):
        a = field
        lo = [slice(None)] * 3
        hi = [slice(None)] * 3
        lo[axis] = slice(None, -1)
        hi[axis] = slice(1, None)
        v0 = a[tuple(lo)]
        v1 = a[tuple(hi)]
        cross = (v0 < 0) != (v1 < 0)
        idx = np.argwhere(cross)
        if len(idx) == 0:
            continue
        f0 = v0[cross]
        f1 = v1[cross]
        t = f0 / (f0 - f1)
        coords = idx.astype(np.float64)
        coords[:, axis] += t
        pts.append(origin + coords * h)
    if not pts:
        return np.empty((0, 3))
    return np.vstack(pts)


def compute_ses_field(mol, sel, params: SesParams | None = None,
                      voxel_budget: int = DEFAULT_VOXEL_BUDGET) -> ScalarField:
    """SES signed field over the selection; zero level set is the surface."""
    params = params or SesParams()
    idx = getattr(sel, "atom_indices", sel)
    idx = np.asarray(idx, dtype=np.int64)
    if len(idx) == 0:
        raise ValueError("SES needs a non-empty selection")
    centers = mol.coords[idx]
    radii = mol.radii[idx]
    rp = params.probe_radius
    h = params.grid_spacing

    pad = float(radii.max()) + 2.0 * rp + 2.0 * h
    origin = centers.min(axis=0) - pad
    top = centers.max(axis=0) + pad
    dims = tuple(int(np.ceil((top[k] - origin[k]) / h)) + 1 for k in range(3))
    nvox = dims[0] * dims[1] * dims[2]
    if nvox > voxel_budget:
        raise GridTooLarge(
            f"SES grid {dims} = {nvox} voxels exceeds budget {voxel_budget}; "
            "increase grid_spacing"
        )

    band = rp + 2.0 * h
    clamp = band + 2.0 * h
    d_sas = sas_distance_grid(centers, radii, rp, origin, dims, h, clamp)

    bpts = boundary_points(d_sas, origin, h)
    inside = d_sas < 0
    f = np.where(inside, np.float32(-rp), d_sas + np.float32(rp))
    if len(bpts) and inside.any():
        tree = cKDTree(bpts)
        vidx = np.argwhere(inside)
        vpos = origin + vidx.astype(np.float64) * h
        dist, _ = tree.query(vpos, k=1, distance_upper_bound=band, workers=-1)
        dist = dist.astype(np.float32)
        near = np.isfinite(dist)
        vals = np.full(len(vidx), np.float32(-rp))
        vals[near] = np.float32(rp) - dist[near]
        f[tuple(vidx.T)] = vals
    return ScalarField(origin=origin, spacing=h, values=f)
