"""Marching cubes isosurface extraction.

Standard 256-case table with linear edge interpolation. Vertices are shared
through edge-keyed deduplication, so closed fields produce watertight
2-manifolds. Winding is chosen so triangle normals point toward positive
field values; shading normals come from central differences of the field.
Cells are processed in index order, so output is deterministic.
"""

from __future__ import annotations

import numpy as np

from .mc_tables import CORNERS, EDGE_ENDS, EDGE_MASKS, TRI_TABLE
from .mesh import TriMesh, empty_mesh
from .ses import ScalarField

# per edge: grid offset of its lower corner and the axis it runs along
_EDGE_LOW = np.empty((12, 3), dtype=np.int64)
_EDGE_AXIS = np.empty(12, dtype=np.int64)
for _e in range(12):
    _a, _b = CORNERS[EDGE_ENDS[_e, 0]], CORNERS[EDGE_ENDS[_e, 1]]
    _EDGE_LOW[_e] = np.minimum(_a, _b)
    _EDGE_AXIS[_e] = int(np.argmax(np.abs(_a - _b)))

_AXIS_STEP = np.eye(3, dtype=np.int64)


def marching_cubes(field: ScalarField, iso: float = 0.0) -> TriMesh:
    vals = np.asarray(field.values, dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        raise ValueError("field contains non-finite values")
    nx, ny, nz = vals.shape
    h = field.spacing

    # values exactly at iso are nudged outside so crossings are strict and
    # no degenerate zero-length edges appear
    eps = 1e-6 * max(1.0, float(np.abs(vals).max()))
    vals = np.where(vals == iso, iso + eps, vals)

    inside = vals < iso
    case = np.zeros((nx - 1, ny - 1, nz - 1), dtype=np.uint16)
    for bit in range(8):
        dx, dy, dz = CORNERS[bit]
        case |= inside[dx:nx - 1 + dx, dy:ny - 1 + dy, dz:nz - 1 + dz].astype(np.uint16) << bit

    active = np.argwhere((case != 0) & (case != 255))
    if len(active) == 0:
        return empty_mesh()
    cell_case = case[tuple(active.T)]

    rows = TRI_TABLE[cell_case][:, :15].reshape(-1, 5, 3)     # (m, 5, 3)
    tri_valid = rows[:, :, 0] >= 0                            # (m, 5)
    mcell, mtri = np.nonzero(tri_valid)
    edges = rows[mcell, mtri]                                 # (t, 3) edge ids

    cell_xyz = active[mcell]                                  # (t, 3)
    corner = cell_xyz[:, None, :] + _EDGE_LOW[edges]          # (t, 3, 3)
    axis = _EDGE_AXIS[edges]                                  # (t, 3)
    keys = ((corner[..., 0] * ny + corner[..., 1]) * nz + corner[..., 2]) * 3 + axis

    uniq_keys, inv = np.unique(keys.reshape(-1), return_inverse=True)
    triangles = inv.reshape(-1, 3).astype(np.int32)

    vaxis = (uniq_keys % 3).astype(np.int64)
    vlin = uniq_keys // 3
    g0 = np.empty((len(uniq_keys), 3), dtype=np.int64)
    g0[:, 2] = vlin % nz
    g0[:, 1] = (vlin // nz) % ny
    g0[:, 0] = vlin // (nz * ny)
    g1 = g0 + _AXIS_STEP[vaxis]

    v0 = vals[g0[:, 0], g0[:, 1], g0[:, 2]]
    v1 = vals[g1[:, 0], g1[:, 1], g1[:, 2]]
    t = (iso - v0) / (v1 - v0)
    pos_grid = g0.astype(np.float64)
    pos_grid[np.arange(len(t)), vaxis] += t
    vertices = field.origin + pos_grid * h

    grad0 = _central_gradient(vals, g0, h)
    grad1 = _central_gradient(vals, g1, h)
    normals = grad0 * (1.0 - t)[:, None] + grad1 * t[:, None]
    norm = np.linalg.norm(normals, axis=1)
    norm[norm == 0] = 1.0
    normals /= norm[:, None]

    # table convention yields inward-facing loops for "inside = below iso";
    # swap two corners so geometric normals align with the field gradient
    triangles = triangles[:, [0, 2, 1]]
    return TriMesh(vertices, normals, triangles)


def _central_gradient(vals: np.ndarray, g: np.ndarray, h: float) -> np.ndarray:
    nx, ny, nz = vals.shape
    out = np.empty((len(g), 3), dtype=np.float64)
    for axis, n in ((0, nx), (1, ny), (2, nz)):
        lo = g.copy()
        hi = g.copy()
        lo[:, axis] = np.maximum(g[:, axis] - 1, 0)
        hi[:, axis] = np.minimum(g[:, axis] + 1, n - 1)
        span = (hi[:, axis] - lo[:, axis]) * h
        span[span == 0] = h
        out[:, axis] = (vals[hi[:, 0], hi[:, 1], hi[:, 2]]
                        - vals[lo[:, 0], lo[:, 1], lo[:, 2]]) / span
    return out
