"""Deferred shading, screen-space ambient occlusion and post effects.

All passes read the G-buffer only; nothing here touches scene geometry.
Sampling patterns are deterministic (Hammersley points with a per-pixel
hash rotation), so identical inputs produce identical images.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .raster import GBuffer

AMBIENT = 0.15
SPECULAR_STRENGTH = 0.5
SPECULAR_POWER = 32
TOON_BANDS = 4
HEADLIGHT = np.array([0.0, 0.0, 1.0])


@dataclass
class PostFxParams:
    shading: str = "matte"                 # flat | matte | glossy | toon
    ssao_enabled: bool = False
    ssao_radius: float = 2.5               # Angstrom
    ssao_samples: int = 16
    ssao_intensity: float = 1.0
    fog_enabled: bool = False
    fog_near: float = 0.0
    fog_far: float = 100.0
    fog_color: tuple = (1.0, 1.0, 1.0)
    outline_enabled: bool = False
    outline_color: tuple = (0.0, 0.0, 0.0)
    outline_depth_threshold: float = 0.05  # relative to local depth
    outline_normal_threshold_deg: float = 45.0
    aa_factor: int = 1                     # 1 | 2 | 4

    def __post_init__(self):
        if self.shading not in ("flat", "matte", "glossy", "toon"):
            raise ValueError(f"unknown shading model {self.shading!r}")
        if self.aa_factor not in (1, 2, 4):
            raise ValueError("aa_factor must be 1, 2 or 4")
        if self.ssao_radius <= 0 or self.ssao_samples <= 0:
            raise ValueError("ssao parameters must be positive")
        if self.outline_depth_threshold <= 0 or self.outline_normal_threshold_deg <= 0:
            raise ValueError("outline thresholds must be positive")


def shade(g: GBuffer, params: PostFxParams, light=HEADLIGHT,
          occlusion: np.ndarray | None = None) -> np.ndarray:
    """Lit RGB (float in [0,1]); background pixels stay black here."""
    finite = g.finite_mask()
    albedo = g.albedo
    if params.shading == "flat":
        out = albedo.copy()
        out[~finite] = 0.0
        return out

    l = np.asarray(light, dtype=np.float64)
    l = l / np.linalg.norm(l)
    ndotl = np.clip(np.einsum("hwc,c->hw", g.normal.astype(np.float64), l), 0.0, None)
    occ = occlusion if occlusion is not None else 1.0

    if params.shading == "toon":
        b = (ndotl + AMBIENT) * occ
        band = (np.floor(np.clip(b, 0.0, 0.999) * TOON_BANDS) + 1.0) / TOON_BANDS
        out = albedo * band[..., None]
    else:
        lit = (ndotl + AMBIENT) * occ
        out = albedo * lit[..., None]
        if params.shading == "glossy":
            view_dir = _pixel_view_dirs(g)           # unit, surface -> camera
            h = l + view_dir
            h /= np.linalg.norm(h, axis=2)[..., None]
            ndoth = np.clip(np.einsum("hwc,hwc->hw", g.normal.astype(np.float64), h), 0.0, None)
            out = out + SPECULAR_STRENGTH * (ndoth ** SPECULAR_POWER)[..., None]
    out = np.clip(out, 0.0, 1.0)
    out[~finite] = 0.0
    return out


def ssao(g: GBuffer, params: PostFxParams) -> np.ndarray:
    """Per-pixel ambient visibility in [0,1]; 1 everywhere when disabled."""
    h, w = g.depth.shape
    if not params.ssao_enabled:
        return np.ones((h, w), dtype=np.float64)

    n_samples = params.ssao_samples
    radius = params.ssao_radius
    bias = 0.02 * radius
    ham = _hammersley(n_samples)
    scales = radius * np.sqrt((np.arange(n_samples) + 1.0) / n_samples)

    occ = np.ones((h, w), dtype=np.float64)
    finite = g.finite_mask()
    # row blocks keep the (pixels x samples) temporaries bounded
    block = max(1, int(4_000_000 / (n_samples * max(w, 1))))
    for y0 in range(0, h, block):
        y1 = min(y0 + block, h)
        sub = finite[y0:y1]
        if not sub.any():
            continue
        yy, xx = np.nonzero(sub)
        yy_abs = yy + y0
        occ_rows = _ssao_block(g, xx, yy_abs, ham, scales, bias, radius)
        block_vals = occ[y0:y1]
        block_vals[yy, xx] = 1.0 - params.ssao_intensity * occ_rows
        occ[y0:y1] = block_vals
    occ = np.clip(occ, 0.0, 1.0)
    return _box_blur(occ, 4)


def _ssao_block(g: GBuffer, xx, yy, ham, scales, bias, radius):
    f = g.focal
    cx, cy = g.width / 2.0, g.height / 2.0
    depth = g.depth.astype(np.float64)
    d = depth[yy, xx]
    nrm = g.normal[yy, xx].astype(np.float64)

    # view-space position of each shaded pixel
    px = (xx + 0.5 - cx) / f
    py = (cy - (yy + 0.5)) / f
    pos = np.stack([px * d, py * d, -d], axis=1)

    # tangent frame per pixel
    helper = np.where(np.abs(nrm[:, 2:3]) < 0.9,
                      np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]))
    t = np.cross(helper, nrm)
    t /= np.linalg.norm(t, axis=1)[:, None]
    b = np.cross(nrm, t)

    rot = _hash01(xx, yy)
    npix = len(xx)
    occluded = np.zeros(npix, dtype=np.float64)
    for i in range(len(scales)):
        u1, u2 = ham[i]
        phi = 2.0 * np.pi * ((u2 + rot) % 1.0)
        sin_t = np.sqrt(u1)
        cos_t = np.sqrt(1.0 - u1)
        local = (np.cos(phi)[:, None] * t + np.sin(phi)[:, None] * b) * sin_t
        local = local + nrm * cos_t
        sample = pos + local * scales[i]
        sz = -sample[:, 2]
        su = np.clip(cx + f * sample[:, 0] / np.maximum(sz, 1e-9), 0, g.width - 1).astype(np.int64)
        sv = np.clip(cy - f * sample[:, 1] / np.maximum(sz, 1e-9), 0, g.height - 1).astype(np.int64)
        stored = depth[sv, su]
        hit = (sz > 0) & np.isfinite(stored) & (stored < sz - bias)
        hit &= np.abs(d - stored) <= radius
        occluded += hit
    return occluded / len(scales)


def post_process(img: np.ndarray, g: GBuffer, params: PostFxParams,
                 background=(0.1, 0.1, 0.1, 1.0)) -> np.ndarray:
    """Fog, background compositing and outline; returns RGBA float."""
    h, w = g.depth.shape
    finite = g.finite_mask()
    rgb = img.copy()

    if params.fog_enabled:
        t = np.clip((g.depth - params.fog_near)
                    / max(params.fog_far - params.fog_near, 1e-9), 0.0, 1.0)
        t = np.where(finite, t, 0.0)[..., None]
        rgb = rgb * (1.0 - t) + np.asarray(params.fog_color) * t

    out = np.empty((h, w, 4), dtype=np.float64)
    bg = np.asarray(background, dtype=np.float64)
    out[..., :3] = np.where(finite[..., None], rgb, bg[:3])
    out[..., 3] = np.where(finite, 1.0, bg[3])

    if params.outline_enabled:
        mask = outline_mask(g, params)
        out[mask, :3] = np.asarray(params.outline_color)
        out[mask, 3] = 1.0
    return out


def outline_mask(g: GBuffer, params: PostFxParams) -> np.ndarray:
    finite = g.finite_mask()
    sentinel = 4.0 * float(g.depth[finite].max()) + 10.0 if finite.any() else 1.0
    depth = np.where(finite, g.depth, sentinel).astype(np.float64)
    gx = ndimage.sobel(depth, axis=1, mode="nearest")
    gy = ndimage.sobel(depth, axis=0, mode="nearest")
    grad = np.hypot(gx, gy) / 8.0
    mask = grad > params.outline_depth_threshold * depth

    cos_thr = np.cos(np.radians(params.outline_normal_threshold_deg))
    n = g.normal.astype(np.float64)
    for axis, shift in ((0, 1), (0, -1), (1, 1), (1, -1)):
        nb = np.roll(n, shift, axis=axis)
        nb_fin = np.roll(finite, shift, axis=axis)
        dot = np.einsum("hwc,hwc->hw", n, nb)
        edge = finite & nb_fin & (dot < cos_thr)
        # roll wraps around the frame; ignore the wrapped row/column
        if axis == 0:
            edge[0 if shift == 1 else -1, :] = False
        else:
            edge[:, 0 if shift == 1 else -1] = False
        mask |= edge
    return mask


def downsample(img: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return img
    h, w = img.shape[:2]
    return img.reshape(h // factor, factor, w // factor, factor, -1).mean(axis=(1, 3))


def _pixel_view_dirs(g: GBuffer) -> np.ndarray:
    f = g.focal
    cx, cy = g.width / 2.0, g.height / 2.0
    xs = (np.arange(g.width) + 0.5 - cx) / f
    ys = (cy - (np.arange(g.height) + 0.5)) / f
    d = np.empty((g.height, g.width, 3), dtype=np.float64)
    d[..., 0] = -xs[None, :]
    d[..., 1] = -ys[:, None]
    d[..., 2] = 1.0
    d /= np.linalg.norm(d, axis=2)[..., None]
    return d


def _hammersley(n: int) -> np.ndarray:
    pts = np.empty((n, 2))
    for i in range(n):
        bits = i
        v = 0.0
        scale = 0.5
        while bits:
            if bits & 1:
                v += scale
            bits >>= 1
            scale *= 0.5
        pts[i] = ((i + 0.5) / n, v)
    return pts


def _hash01(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    h = (x.astype(np.uint64) * 1973 + y.astype(np.uint64) * 9277 + 0x9E3779B9) & 0xFFFFFFFF
    h ^= h >> 16
    h = (h * 0x85EBCA6B) & 0xFFFFFFFF
    h ^= h >> 13
    h = (h * 0xC2B2AE35) & 0xFFFFFFFF
    h ^= h >> 16
    return h.astype(np.float64) / 2.0 ** 32


def _box_blur(img: np.ndarray, size: int) -> np.ndarray:
    return ndimage.uniform_filter(img, size=size, mode="nearest")
