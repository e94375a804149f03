"""Secondary-structure assignment and cartoon ribbon meshes.

Assignment uses C-alpha pseudo-distances only, so it works on any file with
coordinates. The ribbon sweeps styled cross-sections along a Catmull-Rom
spline through the C-alpha trace; level of detail is the subdivision count
per residue.
"""

from __future__ import annotations

import enum

import numpy as np

from .mesh import TriMesh, empty_mesh

CHAIN_BREAK_DISTANCE = 4.5    # Angstrom between consecutive C-alphas
RING_SIZE = 8
COIL_RADIUS = 0.3
HELIX_HALF = (0.6, 0.15)      # ellipse half-axes (width, thickness)
SHEET_HALF = (0.7, 0.15)      # rectangle half-sides
ARROW_SCALE = 2.0

HELIX_D3 = (4.5, 5.8)
HELIX_D4 = (5.7, 7.0)
SHEET_D2 = (6.4, 7.4)
SHEET_D3 = (9.1, 10.7)
MIN_HELIX_RUN = 3
MIN_SHEET_RUN = 2


class Structure(enum.Enum):
    HELIX = "helix"
    SHEET = "sheet"
    COIL = "coil"


def assign_secondary_structure(mol) -> list[Structure]:
    """Per-residue label from C-alpha i->i+2/3/4 distances."""
    labels = [Structure.COIL] * mol.n_residues
    for chain in mol.chains():
        res_idx = [r for r in chain.residue_indices]
        ca = {r: mol.residue_atom_name_index(r, "CA") for r in res_idx}
        trace = [r for r in res_idx if ca[r] is not None]
        if len(trace) < 3:
            continue
        pos = mol.coords[[ca[r] for r in trace]]

        def dist(i, k):
            return float(np.linalg.norm(pos[i + k] - pos[i]))

        raw = []
        for i in range(len(trace)):
            label = Structure.COIL
            if i + 4 < len(trace):
                d3, d4 = dist(i, 3), dist(i, 4)
                if HELIX_D3[0] <= d3 <= HELIX_D3[1] and HELIX_D4[0] <= d4 <= HELIX_D4[1]:
                    label = Structure.HELIX
            if label is Structure.COIL and i + 3 < len(trace):
                d2, d3 = dist(i, 2), dist(i, 3)
                if SHEET_D2[0] <= d2 <= SHEET_D2[1] and SHEET_D3[0] <= d3 <= SHEET_D3[1]:
                    label = Structure.SHEET
            raw.append(label)
        raw = _suppress_short_runs(raw, Structure.HELIX, MIN_HELIX_RUN)
        raw = _suppress_short_runs(raw, Structure.SHEET, MIN_SHEET_RUN)
        for r, lab in zip(trace, raw):
            labels[r] = lab
    return labels


def _suppress_short_runs(labels, kind, min_run):
    out = list(labels)
    i = 0
    while i < len(out):
        if out[i] is kind:
            j = i
            while j < len(out) and out[j] is kind:
                j += 1
            if j - i < min_run:
                for k in range(i, j):
                    out[k] = Structure.COIL
            i = j
        else:
            i += 1
    return out


def build_cartoon_mesh(mol, sel, lod: int = 8, structure=None,
                       colors=None, object_id: int = 0) -> TriMesh:
    """Ribbon mesh for the protein residues of a selection.

    lod is clamped to [2, 16] subdivisions per residue. ``colors`` may give
    one RGBA per residue; default is a fixed palette by secondary structure.
    """
    lod = int(np.clip(lod, 2, 16))
    idx = getattr(sel, "atom_indices", sel)
    idx = np.asarray(idx, dtype=np.int64)
    selected = np.zeros(mol.n_atoms, dtype=bool)
    selected[idx] = True
    if structure is None:
        structure = assign_secondary_structure(mol)

    mesh = empty_mesh(object_id)
    for chain in mol.chains():
        trace = []
        for r in chain.residue_indices:
            ca = mol.residue_atom_name_index(r, "CA")
            if ca is None or not selected[ca]:
                continue
            trace.append((r, ca))
        if len(trace) < 2:
            continue
        # split at chain breaks
        pieces = [[trace[0]]]
        for prev, cur in zip(trace, trace[1:]):
            gap = np.linalg.norm(mol.coords[cur[1]] - mol.coords[prev[1]])
            if gap > CHAIN_BREAK_DISTANCE:
                pieces.append([])
            pieces[-1].append(cur)
        for piece in pieces:
            if len(piece) < 2:
                continue
            part = _sweep_piece(mol, piece, lod, structure, colors)
            mesh = mesh.merged_with(part) if mesh.n_vertices else part
    mesh.object_id = object_id
    return mesh


SS_COLORS = {
    Structure.HELIX: (240, 80, 120, 255),
    Structure.SHEET: (250, 200, 60, 255),
    Structure.COIL: (220, 220, 220, 255),
}


def _sweep_piece(mol, piece, lod, structure, res_colors) -> TriMesh:
    res_ids = [r for r, _ in piece]
    pts = mol.coords[[ca for _, ca in piece]]
    n = len(pts)
    nseg = (n - 1) * lod

    # reference direction per control point: carbonyl O direction when the
    # backbone carbonyl exists, discrete Frenet normal otherwise
    refs = np.zeros((n, 3))
    for k, (r, ca) in enumerate(piece):
        c_idx = mol.residue_atom_name_index(r, "C")
        o_idx = mol.residue_atom_name_index(r, "O")
        if c_idx is not None and o_idx is not None:
            v = mol.coords[o_idx] - mol.coords[c_idx]
            nv = np.linalg.norm(v)
            if nv > 1e-9:
                refs[k] = v / nv

    ts = np.arange(nseg + 1, dtype=np.float64) / lod            # in [0, n-1]
    centers, tangents = _catmull_rom(pts, ts)
    frames = _sweep_frames(centers, tangents, refs, ts)

    ring_params = 2.0 * np.pi * np.arange(RING_SIZE) / RING_SIZE
    cosr, sinr = np.cos(ring_params), np.sin(ring_params)

    labels = [structure[r] for r in res_ids]
    strand_final = {
        k for k, lab in enumerate(labels)
        if lab is Structure.SHEET and (k == n - 1 or labels[k + 1] is not Structure.SHEET)
    }

    verts = np.empty(((nseg + 1) * RING_SIZE + 2, 3))
    norms = np.empty_like(verts)
    cols = np.empty((len(verts), 4), dtype=np.uint8)

    for i, t in enumerate(ts):
        ridx = min(int(round(t)), n - 1)
        res = res_ids[ridx]
        label = labels[ridx]
        a, b = _half_axes(label)
        if label is Structure.SHEET:
            # arrowhead widens to 2x then tapers across the final residue
            final = ridx if ridx in strand_final else (
                ridx + 1 if (ridx + 1) in strand_final else None
            )
            if final is not None and t >= final - 1:
                a *= ARROW_SCALE * max(float(final) - t, 0.025)
        u_axis, v_axis = frames[i]
        color = (res_colors[res] if res_colors is not None else SS_COLORS[label])
        base = i * RING_SIZE
        offs = (a * cosr)[:, None] * u_axis + (b * sinr)[:, None] * v_axis
        verts[base:base + RING_SIZE] = centers[i] + offs
        ring_n = (b * cosr)[:, None] * u_axis + (a * sinr)[:, None] * v_axis
        ring_n /= np.linalg.norm(ring_n, axis=1)[:, None]
        norms[base:base + RING_SIZE] = ring_n
        cols[base:base + RING_SIZE] = color

    tris = []
    for i in range(nseg):
        b0, b1 = i * RING_SIZE, (i + 1) * RING_SIZE
        for k in range(RING_SIZE):
            k2 = (k + 1) % RING_SIZE
            tris.append((b0 + k, b1 + k, b0 + k2))
            tris.append((b0 + k2, b1 + k, b1 + k2))

    # end caps
    cap0, cap1 = len(verts) - 2, len(verts) - 1
    verts[cap0], verts[cap1] = centers[0], centers[-1]
    norms[cap0], norms[cap1] = -tangents[0], tangents[-1]
    cols[cap0] = cols[0]
    cols[cap1] = cols[(nseg) * RING_SIZE]
    for k in range(RING_SIZE):
        k2 = (k + 1) % RING_SIZE
        tris.append((cap0, k2, k))
        last = nseg * RING_SIZE
        tris.append((cap1, last + k, last + k2))

    return TriMesh(verts, norms, np.array(tris, dtype=np.int32), cols)


def _catmull_rom(pts: np.ndarray, ts: np.ndarray):
    """Centripetal-free (uniform) Catmull-Rom with reflected endpoints."""
    n = len(pts)
    ext = np.vstack([2 * pts[0] - pts[1], pts, 2 * pts[-1] - pts[-2]])
    seg = np.clip(ts.astype(np.int64), 0, n - 2)
    u = ts - seg
    p0 = ext[seg]
    p1 = ext[seg + 1]
    p2 = ext[seg + 2]
    p3 = ext[seg + 3]
    u = u[:, None]
    pos = 0.5 * (
        (2 * p1)
        + (-p0 + p2) * u
        + (2 * p0 - 5 * p1 + 4 * p2 - p3) * u ** 2
        + (-p0 + 3 * p1 - 3 * p2 + p3) * u ** 3
    )
    der = 0.5 * (
        (-p0 + p2)
        + 2 * (2 * p0 - 5 * p1 + 4 * p2 - p3) * u
        + 3 * (-p0 + 3 * p1 - 3 * p2 + p3) * u ** 2
    )
    return pos, _safe_unit(der)


def _sweep_frames(centers, tangents, refs, ts):
    """Orthonormal (u, v) cross-section frames with sign continuity."""
    n = len(centers)
    frames = []
    prev_u = None
    ref_idx = np.clip(np.round(ts).astype(np.int64), 0, len(refs) - 1)
    for i in range(n):
        t = tangents[i]
        r = refs[ref_idx[i]]
        if np.linalg.norm(r) < 1e-6:
            r = _frenet_normal(centers, tangents, i)
        u = r - np.dot(r, t) * t
        nu = np.linalg.norm(u)
        if nu < 1e-9:
            u = _any_perpendicular(t)
        else:
            u = u / nu
        if prev_u is not None and np.dot(u, prev_u) < 0:
            u = -u
        prev_u = u
        v = np.cross(t, u)
        frames.append((u, v))
    return frames


def _frenet_normal(centers, tangents, i):
    j = min(i + 1, len(tangents) - 1)
    k = max(i - 1, 0)
    d = tangents[j] - tangents[k]
    nd = np.linalg.norm(d)
    if nd < 1e-9:
        return _any_perpendicular(tangents[i])
    return d / nd


def _any_perpendicular(t):
    a = np.array([1.0, 0.0, 0.0]) if abs(t[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(t, a)
    return u / np.linalg.norm(u)


def _half_axes(label: Structure):
    if label is Structure.HELIX:
        return HELIX_HALF
    if label is Structure.SHEET:
        return SHEET_HALF
    return COIL_RADIUS, COIL_RADIUS


def _safe_unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v, axis=1)
    n[n == 0] = 1.0
    return v / n[:, None]
