"""Tile-parallel software rasterizer with per-pixel ray-cast impostors.

Spheres and cylinders are rasterized as conservative screen-space bounding
quads; every covered pixel solves the primitive's implicit equation
analytically and writes the exact hit depth and normal. Triangle meshes use
edge-function rasterization with perspective-correct interpolation. Work is
split over screen tiles; each tile owns a disjoint region of the G-buffer,
so the result is independent of the number of worker threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..geom.batches import CylinderBatch, SphereBatch
from ..geom.mesh import TriMesh
from . import quat
from .camera import CameraState

DEFAULT_TILE = 64
_PAIR_SLAB = 8_000_000   # max pixel-primitive pairs processed at once


@dataclass
class GBuffer:
    width: int
    height: int
    depth: np.ndarray      # (h, w) float32, +inf background
    normal: np.ndarray     # (h, w, 3) float32 view-space unit
    albedo: np.ndarray     # (h, w, 3) float32 in [0, 1]
    material: np.ndarray   # (h, w) uint16, 0 background
    object: np.ndarray     # (h, w) int32, -1 background
    focal: float = 0.0     # pixels; needed to reconstruct view positions

    @classmethod
    def empty(cls, width: int, height: int) -> "GBuffer":
        return cls(
            width, height,
            depth=np.full((height, width), np.inf, dtype=np.float32),
            normal=np.zeros((height, width, 3), dtype=np.float32),
            albedo=np.zeros((height, width, 3), dtype=np.float32),
            material=np.zeros((height, width), dtype=np.uint16),
            object=np.full((height, width), -1, dtype=np.int32),
        )

    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self.depth)


def pick(g: GBuffer, x: int, y: int):
    """Object id under a pixel, or None on background."""
    if not (0 <= x < g.width and 0 <= y < g.height):
        raise IndexError("pixel out of bounds")
    oid = int(g.object[y, x])
    return None if oid < 0 else oid


class _View:
    def __init__(self, cam: CameraState, width: int, height: int):
        self.rot = quat.to_matrix(cam.orientation)   # camera->world
        self.pos = cam.position
        self.width = width
        self.height = height
        self.f = (height / 2.0) / np.tan(np.radians(cam.fov_deg) / 2.0)
        self.cx = width / 2.0
        self.cy = height / 2.0
        self.near = cam.near

    def to_view(self, pts: np.ndarray) -> np.ndarray:
        return (np.asarray(pts, dtype=np.float64) - self.pos) @ self.rot

    def vec_to_view(self, v: np.ndarray) -> np.ndarray:
        return np.asarray(v, dtype=np.float64) @ self.rot

    def project(self, view_pts: np.ndarray):
        """Screen (u, v) and positive depth for view-space points."""
        d = -view_pts[:, 2]
        safe = np.where(np.abs(d) < 1e-12, 1e-12, d)
        u = self.cx + self.f * view_pts[:, 0] / safe
        v = self.cy - self.f * view_pts[:, 1] / safe
        return u, v, d


def rasterize(batches, cam: CameraState, width: int, height: int,
              tile_size: int = DEFAULT_TILE, threads: int = 1) -> GBuffer:
    g = GBuffer.empty(width, height)
    view = _View(cam, width, height)
    g.focal = view.f

    spheres = _pack_spheres(batches, view)
    cylinders = _pack_cylinders(batches, view)
    triangles = _pack_triangles(batches, view)

    ntx = (width + tile_size - 1) // tile_size
    nty = (height + tile_size - 1) // tile_size
    bins = [
        _bin_to_tiles(arr["bbox"], tile_size, ntx, nty) if arr else None
        for arr in (spheres, cylinders, triangles)
    ]

    def run_tile(tid: int):
        ty, tx = divmod(tid, ntx)
        x0, y0 = tx * tile_size, ty * tile_size
        x1, y1 = min(x0 + tile_size, width), min(y0 + tile_size, height)
        tile = _Tile(x0, y0, x1, y1, view)
        if spheres:
            tile.draw(spheres, bins[0].members(tid), _SphereSolver)
        if cylinders:
            tile.draw(cylinders, bins[1].members(tid), _CylinderSolver)
        if triangles:
            tile.draw(triangles, bins[2].members(tid), _TriangleSolver)
        tile.store(g)

    tile_ids = range(ntx * nty)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run_tile, tile_ids))
    else:
        for tid in tile_ids:
            run_tile(tid)
    return g


# -- packing ------------------------------------------------------------------


def _pack_spheres(batches, view: _View):
    cs, rs, cols, objs, mats = [], [], [], [], []
    for b in batches:
        if not isinstance(b, SphereBatch) or len(b) == 0:
            continue
        cs.append(view.to_view(b.centers))
        rs.append(np.asarray(b.radii, dtype=np.float64))
        cols.append(b.colors[:, :3].astype(np.float32) / 255.0)
        objs.append(np.full(len(b), b.object_id, dtype=np.int32))
        mats.append(b.material_ids.astype(np.uint16))
    if not cs:
        return None
    c = np.vstack(cs)
    r = np.concatenate(rs)
    keep = (-c[:, 2]) + r >= view.near
    c, r = c[keep], r[keep]
    out = {
        "c": c, "r": r,
        "cc": np.einsum("ij,ij->i", c, c),
        "dmin": np.maximum(-c[:, 2] - r, view.near),
        "col": np.vstack(cols)[keep],
        "obj": np.concatenate(objs)[keep],
        "mat": np.concatenate(mats)[keep],
    }
    out["bbox"] = _sphere_bbox(c, r, view)
    return out if len(c) else None


def _sphere_bbox(c, r, view: _View):
    d = -c[:, 2]
    safe = np.maximum(d - r, 1e-6)
    u, v, _ = view.project(c)
    rad_px = view.f * r / safe + 1.0
    # center behind the near plane: cover the viewport (conservative)
    bad = d <= view.near
    bbox = np.empty((len(c), 4), dtype=np.float64)
    bbox[:, 0] = np.where(bad, 0.0, u - rad_px)
    bbox[:, 1] = np.where(bad, 0.0, v - rad_px)
    bbox[:, 2] = np.where(bad, view.width, u + rad_px)
    bbox[:, 3] = np.where(bad, view.height, v + rad_px)
    return bbox


def _pack_cylinders(batches, view: _View):
    p0s, p1s, rs, col0, col1, objs, mats = [], [], [], [], [], [], []
    for b in batches:
        if not isinstance(b, CylinderBatch) or len(b) == 0:
            continue
        p0s.append(view.to_view(b.p0))
        p1s.append(view.to_view(b.p1))
        rs.append(np.full(len(b), b.radius, dtype=np.float64))
        col0.append(b.colors[:, 0, :3].astype(np.float32) / 255.0)
        col1.append(b.colors[:, 1, :3].astype(np.float32) / 255.0)
        objs.append(np.full(len(b), b.object_id, dtype=np.int32))
        mats.append(b.material_ids.astype(np.uint16))
    if not p0s:
        return None
    p0 = np.vstack(p0s)
    p1 = np.vstack(p1s)
    r = np.concatenate(rs)
    keep = np.maximum(-p0[:, 2], -p1[:, 2]) + r >= view.near
    p0, p1, r = p0[keep], p1[keep], r[keep]
    if not len(p0):
        return None
    b0 = _sphere_bbox(p0, r, view)
    b1 = _sphere_bbox(p1, r, view)
    bbox = np.empty_like(b0)
    bbox[:, :2] = np.minimum(b0[:, :2], b1[:, :2])
    bbox[:, 2:] = np.maximum(b0[:, 2:], b1[:, 2:])
    axis = p1 - p0
    length = np.linalg.norm(axis, axis=1)
    length[length == 0] = 1.0
    return {
        "p0": p0, "p1": p1, "r": r, "bbox": bbox,
        "axis": axis / length[:, None], "len": length,
        "dmin": np.maximum(np.minimum(-p0[:, 2], -p1[:, 2]) - r, view.near),
        "col0": np.vstack(col0)[keep], "col1": np.vstack(col1)[keep],
        "obj": np.concatenate(objs)[keep], "mat": np.concatenate(mats)[keep],
    }


def _pack_triangles(batches, view: _View):
    vs, ns, cols, objs, mats = [], [], [], [], []
    for b in batches:
        if not isinstance(b, TriMesh) or b.n_triangles == 0:
            continue
        vv = view.to_view(b.vertices)
        nv = view.vec_to_view(b.normals)
        cc = b.colors[:, :3].astype(np.float32) / 255.0
        tri_v, tri_n, tri_c = _clip_near(vv, nv, cc, b.triangles, view.near)
        if not len(tri_v):
            continue
        vs.append(tri_v)
        ns.append(tri_n)
        cols.append(tri_c)
        objs.append(np.full(len(tri_v), b.object_id, dtype=np.int32))
        mats.append(np.full(len(tri_v), b.material_id, dtype=np.uint16))
    if not vs:
        return None
    v = np.vstack(vs)            # (m, 3, 3) view-space corners
    n = np.vstack(ns)
    c = np.vstack(cols)
    flat = v.reshape(-1, 3)
    u, w, d = view.project(flat)
    su = u.reshape(-1, 3)
    sv = w.reshape(-1, 3)
    sd = d.reshape(-1, 3)
    bbox = np.stack([
        su.min(axis=1), sv.min(axis=1), su.max(axis=1), sv.max(axis=1)
    ], axis=1)
    return {
        "su": su, "sv": sv, "sd": sd, "n": n, "col": c, "bbox": bbox,
        "dmin": sd.min(axis=1),
        "obj": np.concatenate(objs), "mat": np.concatenate(mats),
    }


def _clip_near(verts, normals, colors, tris, near):
    """Clip triangles to depth >= near; lerps normals and colors."""
    d = -verts[:, 2]
    tri_d = d[tris]
    front = tri_d >= near
    nfront = front.sum(axis=1)

    out_v, out_n, out_c = [], [], []
    full = tris[nfront == 3]
    if len(full):
        out_v.append(verts[full])
        out_n.append(normals[full])
        out_c.append(colors[full])

    for ti in np.flatnonzero((nfront == 1) | (nfront == 2)):
        poly = []
        idx = tris[ti]
        for k in range(3):
            a, b = idx[k], idx[(k + 1) % 3]
            da, db = d[a], d[b]
            pa = (verts[a], normals[a], colors[a])
            if da >= near:
                poly.append(pa)
            if (da >= near) != (db >= near):
                t = (near - da) / (db - da)
                poly.append((
                    verts[a] + t * (verts[b] - verts[a]),
                    normals[a] + t * (normals[b] - normals[a]),
                    colors[a] + t * (colors[b] - colors[a]),
                ))
        for k in range(1, len(poly) - 1):
            out_v.append(np.array([poly[0][0], poly[k][0], poly[k + 1][0]])[None])
            out_n.append(np.array([poly[0][1], poly[k][1], poly[k + 1][1]])[None])
            out_c.append(np.array([poly[0][2], poly[k][2], poly[k + 1][2]])[None])

    if not out_v:
        z = np.empty((0, 3, 3))
        return z, z.copy(), np.empty((0, 3, 3), dtype=np.float32)
    return np.vstack(out_v), np.vstack(out_n), np.vstack(out_c).astype(np.float32)


# -- tile machinery -----------------------------------------------------------


class _TileBins:
    def __init__(self, tile_ids, prim_ids):
        order = np.argsort(tile_ids, kind="stable")
        self.tile_ids = tile_ids[order]
        self.prim_ids = prim_ids[order]

    def members(self, tid: int) -> np.ndarray:
        lo = np.searchsorted(self.tile_ids, tid)
        hi = np.searchsorted(self.tile_ids, tid + 1)
        return self.prim_ids[lo:hi]


def _bin_to_tiles(bbox, tile_size, ntx, nty) -> _TileBins:
    tx0 = np.clip(np.floor(bbox[:, 0] / tile_size), 0, ntx - 1).astype(np.int64)
    ty0 = np.clip(np.floor(bbox[:, 1] / tile_size), 0, nty - 1).astype(np.int64)
    tx1 = np.clip(np.floor(bbox[:, 2] / tile_size), 0, ntx - 1).astype(np.int64)
    ty1 = np.clip(np.floor(bbox[:, 3] / tile_size), 0, nty - 1).astype(np.int64)
    nx = tx1 - tx0 + 1
    ny = ty1 - ty0 + 1
    counts = nx * ny
    total = int(counts.sum())
    prim = np.repeat(np.arange(len(bbox), dtype=np.int64), counts)
    out_starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    pos = np.arange(total, dtype=np.int64) - np.repeat(out_starts, counts)
    nxr = np.repeat(nx, counts)
    dx = pos % nxr
    dy = pos // nxr
    tx = np.repeat(tx0, counts) + dx
    ty = np.repeat(ty0, counts) + dy
    return _TileBins(ty * ntx + tx, prim)


class _Tile:
    def __init__(self, x0, y0, x1, y1, view: _View):
        self.x0, self.y0, self.x1, self.y1 = x0, y0, x1, y1
        self.w = x1 - x0
        self.h = y1 - y0
        self.view = view
        npix = self.w * self.h
        self.depth = np.full(npix, np.inf, dtype=np.float64)
        self.normal = np.zeros((npix, 3), dtype=np.float32)
        self.albedo = np.zeros((npix, 3), dtype=np.float32)
        self.material = np.zeros(npix, dtype=np.uint16)
        self.object = np.full(npix, -1, dtype=np.int32)

    def store(self, g: GBuffer):
        sl = np.s_[self.y0:self.y1, self.x0:self.x1]
        g.depth[sl] = self.depth.reshape(self.h, self.w).astype(np.float32)
        g.normal[sl] = self.normal.reshape(self.h, self.w, 3)
        g.albedo[sl] = self.albedo.reshape(self.h, self.w, 3)
        g.material[sl] = self.material.reshape(self.h, self.w)
        g.object[sl] = self.object.reshape(self.h, self.w)

    def pixel_rays(self, pix):
        if not hasattr(self, "_dx"):
            xs = self.x0 + np.arange(self.w)
            ys = self.y0 + np.arange(self.h)
            v = self.view
            dxr = (xs + 0.5 - v.cx) / v.f
            dyr = (v.cy - (ys + 0.5)) / v.f
            self._dx = np.broadcast_to(dxr[None, :], (self.h, self.w)).reshape(-1).copy()
            self._dy = np.broadcast_to(dyr[:, None], (self.h, self.w)).reshape(-1).copy()
        return self._dx[pix], self._dy[pix]

    def expand_pairs(self, prim_ids, bbox):
        """(pair_pix, pair_prim) for bbox regions clipped to this tile."""
        x0 = np.clip(np.floor(bbox[prim_ids, 0]).astype(np.int64), self.x0, self.x1)
        y0 = np.clip(np.floor(bbox[prim_ids, 1]).astype(np.int64), self.y0, self.y1)
        x1 = np.clip(np.ceil(bbox[prim_ids, 2]).astype(np.int64) + 1, self.x0, self.x1)
        y1 = np.clip(np.ceil(bbox[prim_ids, 3]).astype(np.int64) + 1, self.y0, self.y1)
        w = np.maximum(x1 - x0, 0)
        h = np.maximum(y1 - y0, 0)
        areas = w * h
        total = int(areas.sum())
        if total == 0:
            e = np.empty(0, dtype=np.int64)
            return e, e
        out_starts = np.concatenate(([0], np.cumsum(areas)[:-1]))
        pos = np.arange(total, dtype=np.int64) - np.repeat(out_starts, areas)
        wrep = np.repeat(w, areas)
        lx = np.repeat(x0, areas) + pos % wrep
        ly = np.repeat(y0, areas) + pos // wrep
        pair_pix = (ly - self.y0) * self.w + (lx - self.x0)
        pair_prim = np.repeat(prim_ids, areas)
        return pair_pix, pair_prim

    def draw(self, packed, prim_ids, solver):
        """Front-to-back slabs with occlusion pruning.

        Primitives are ordered by their nearest possible depth; a slab whose
        first primitive starts beyond every current tile depth cannot win any
        pixel, so the rest of the list is dropped. The outcome is identical
        to exhaustive processing.
        """
        if len(prim_ids) == 0:
            return
        dmin = packed["dmin"][prim_ids]
        order = np.argsort(dmin, kind="stable")
        prim_ids = prim_ids[order]
        dmin = dmin[order]

        bbox = packed["bbox"]
        w = (np.minimum(np.ceil(bbox[prim_ids, 2]) + 1, self.x1)
             - np.maximum(np.floor(bbox[prim_ids, 0]), self.x0))
        h = (np.minimum(np.ceil(bbox[prim_ids, 3]) + 1, self.y1)
             - np.maximum(np.floor(bbox[prim_ids, 1]), self.y0))
        areas = np.maximum(w, 0) * np.maximum(h, 0)
        cum = np.cumsum(areas)
        lo = 0
        # grow the pair budget geometrically: the first slabs fill the depth
        # buffer cheaply, letting the occlusion break prune the long tail
        budget = 1 << 17
        while lo < len(prim_ids):
            cur_max = self.depth.max()
            if dmin[lo] > cur_max:
                break
            base = cum[lo - 1] if lo else 0.0
            hi = int(np.searchsorted(cum, base + budget)) + 1
            hi = max(min(hi, len(prim_ids)), lo + 1)
            budget = min(budget * 4, _PAIR_SLAB)
            slab = prim_ids[lo:hi]
            slab = slab[dmin[lo:hi] <= cur_max]
            if len(slab):
                self._draw_slab(packed, slab, solver)
            lo = hi

    def _draw_slab(self, packed, prim_ids, solver):
        pix, prim = self.expand_pairs(prim_ids, packed["bbox"])
        if len(pix) == 0:
            return
        dx, dy = self.pixel_rays(pix)
        t, valid = solver.depths(packed, prim, dx, dy, self.view)
        valid &= t <= self.depth[pix]    # cheap pre-cull against current buffer
        if not valid.any():
            return
        pix, prim, t = pix[valid], prim[valid], t[valid]
        dx, dy = dx[valid], dy[valid]
        np.minimum.at(self.depth, pix, t)
        win = t == self.depth[pix]
        pixw = pix[win]
        primw = prim[win]
        normal, albedo = solver.attributes(
            packed, primw, dx[win], dy[win], t[win], self.view
        )
        self.normal[pixw] = normal
        self.albedo[pixw] = albedo
        self.material[pixw] = packed["mat"][primw]
        self.object[pixw] = packed["obj"][primw]


# -- per-kind analytic solvers --------------------------------------------------
# each solver exposes depths() for the cheap hit test and attributes() which
# recomputes normals/colors only for pixels that won the depth test


class _SphereSolver:
    @staticmethod
    def depths(packed, prim, dx, dy, view: _View):
        c = packed["c"][prim]
        r = packed["r"][prim]
        a = dx * dx + dy * dy + 1.0
        b = -2.0 * (dx * c[:, 0] + dy * c[:, 1] - c[:, 2])
        c0 = packed["cc"][prim] - r * r
        disc = b * b - 4.0 * a * c0
        valid = disc >= 0.0
        sq = np.sqrt(np.where(valid, disc, 0.0))
        t1 = (-b - sq) / (2.0 * a)
        t2 = (-b + sq) / (2.0 * a)
        t = np.where(t1 >= view.near, t1, t2)
        valid &= t >= view.near
        return t, valid

    @staticmethod
    def attributes(packed, prim, dx, dy, t, view: _View):
        c = packed["c"][prim]
        r = packed["r"][prim]
        hit = np.stack([t * dx, t * dy, -t], axis=1)
        normal = (hit - c) / r[:, None]
        nl = np.linalg.norm(normal, axis=1)
        nl[nl == 0] = 1.0
        return (normal / nl[:, None]).astype(np.float32), packed["col"][prim]


class _CylinderSolver:
    @staticmethod
    def _roots(packed, prim, dx, dy, view: _View):
        p0 = packed["p0"][prim]
        axis = packed["axis"][prim]
        length = packed["len"][prim]
        r = packed["r"][prim]
        d = np.stack([dx, dy, -np.ones_like(dx)], axis=1)
        da = np.einsum("ij,ij->i", d, axis)
        w0 = -p0
        wa = np.einsum("ij,ij->i", w0, axis)
        dperp = d - da[:, None] * axis
        wperp = w0 - wa[:, None] * axis
        A = np.einsum("ij,ij->i", dperp, dperp)
        B = 2.0 * np.einsum("ij,ij->i", dperp, wperp)
        C = np.einsum("ij,ij->i", wperp, wperp) - r * r
        okA = A > 1e-12
        disc = B * B - 4.0 * A * C
        valid = okA & (disc >= 0.0)
        sq = np.sqrt(np.where(valid, disc, 0.0))
        safeA = np.where(okA, A, 1.0)
        t1 = (-B - sq) / (2.0 * safeA)
        t2 = (-B + sq) / (2.0 * safeA)
        s1 = t1 * da + wa
        s2 = t2 * da + wa
        ok1 = (t1 >= view.near) & (s1 >= 0.0) & (s1 <= length)
        ok2 = (t2 >= view.near) & (s2 >= 0.0) & (s2 <= length)
        t = np.where(ok1, t1, t2)
        s = np.where(ok1, s1, s2)
        return t, s, valid & (ok1 | ok2), length

    @classmethod
    def depths(cls, packed, prim, dx, dy, view: _View):
        t, _, valid, _ = cls._roots(packed, prim, dx, dy, view)
        return t, valid

    @classmethod
    def attributes(cls, packed, prim, dx, dy, t, view: _View):
        _, s, _, length = cls._roots(packed, prim, dx, dy, view)
        p0 = packed["p0"][prim]
        axis = packed["axis"][prim]
        r = packed["r"][prim]
        d = np.stack([dx, dy, -np.ones_like(dx)], axis=1)
        hit = t[:, None] * d
        normal = (hit - (p0 + s[:, None] * axis)) / r[:, None]
        nl = np.linalg.norm(normal, axis=1)
        nl[nl == 0] = 1.0
        normal = (normal / nl[:, None]).astype(np.float32)
        albedo = np.where((s < 0.5 * length)[:, None],
                          packed["col0"][prim], packed["col1"][prim])
        return normal, albedo


class _TriangleSolver:
    @staticmethod
    def _bary(packed, prim, dx, dy, view: _View):
        su = packed["su"][prim]
        sv = packed["sv"][prim]
        sd = packed["sd"][prim]
        px = view.cx + dx * view.f
        py = view.cy - dy * view.f
        w0 = _edge(su[:, 1], sv[:, 1], su[:, 2], sv[:, 2], px, py)
        w1 = _edge(su[:, 2], sv[:, 2], su[:, 0], sv[:, 0], px, py)
        w2 = _edge(su[:, 0], sv[:, 0], su[:, 1], sv[:, 1], px, py)
        area = w0 + w1 + w2
        pos = (w0 >= 0) & (w1 >= 0) & (w2 >= 0)
        neg = (w0 <= 0) & (w1 <= 0) & (w2 <= 0)
        valid = (np.abs(area) > 1e-12) & (pos | neg)
        safe = np.where(valid, area, 1.0)
        q0 = (w0 / safe) / sd[:, 0]
        q1 = (w1 / safe) / sd[:, 1]
        q2 = (w2 / safe) / sd[:, 2]
        invd = q0 + q1 + q2
        bad = invd <= 1e-12
        invd = np.where(bad, 1.0, invd)
        t = 1.0 / invd
        return t, (q0, q1, q2), valid & ~bad

    @classmethod
    def depths(cls, packed, prim, dx, dy, view: _View):
        t, _, valid = cls._bary(packed, prim, dx, dy, view)
        valid &= t >= view.near
        return t, valid

    @classmethod
    def attributes(cls, packed, prim, dx, dy, t, view: _View):
        _, (q0, q1, q2), _ = cls._bary(packed, prim, dx, dy, view)

        def persp(attr):
            num = (attr[:, 0] * q0[:, None] + attr[:, 1] * q1[:, None]
                   + attr[:, 2] * q2[:, None])
            return num * t[:, None]

        normal = persp(packed["n"][prim])
        nl = np.linalg.norm(normal, axis=1)
        nl[nl == 0] = 1.0
        normal /= nl[:, None]
        d = np.stack([dx, dy, -np.ones_like(dx)], axis=1)
        flip = np.einsum("ij,ij->i", normal, d) > 0
        normal[flip] = -normal[flip]
        albedo = np.clip(persp(packed["col"][prim]), 0.0, 1.0).astype(np.float32)
        return normal.astype(np.float32), albedo


def _edge(ax, ay, bx, by, px, py):
    return (bx - ax) * (py - ay) - (by - ay) * (px - ax)
