"""Full-pipeline rendering to PNG with custom RGBA background."""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

from ..errors import OutOfMemory, ResolutionTooLarge
from .camera import CameraState
from .raster import rasterize
from .shading import PostFxParams, downsample, post_process, shade, ssao

MAX_WIDTH = 7680
MAX_HEIGHT = 4320
DEFAULT_MEMORY_BUDGET = 8 * 1024 ** 3
_BYTES_PER_PIXEL = 96   # G-buffer + float intermediates, rough upper bound


def render_frame(batches, cam: CameraState, width: int, height: int,
                 params: PostFxParams | None = None,
                 background=(0.1, 0.1, 0.1, 1.0),
                 tile_size: int = 64, threads: int = 1) -> np.ndarray:
    """Render to an RGBA uint8 array (h, w, 4)."""
    params = params or PostFxParams()
    f = params.aa_factor
    g = rasterize(batches, cam, width * f, height * f,
                  tile_size=tile_size, threads=threads)
    occ = ssao(g, params) if params.ssao_enabled else None
    img = shade(g, params, occlusion=occ)
    bg = np.asarray(background, dtype=np.float64)
    if bg.max() > 1.0:
        bg = bg / 255.0
    rgba = post_process(img, g, params, background=bg)
    rgba = downsample(rgba, f)
    return np.clip(np.rint(rgba * 255.0), 0, 255).astype(np.uint8)


def snapshot(batches, cam: CameraState, width: int, height: int,
             params: PostFxParams | None = None,
             background=(26, 26, 26, 255),
             tile_size: int = 64, threads: int = 1,
             allow_large: bool = False,
             memory_budget: int = DEFAULT_MEMORY_BUDGET) -> bytes:
    """PNG bytes (8-bit RGBA, non-interlaced); 8K cap unless allow_large."""
    if width <= 0 or height <= 0:
        raise ValueError("snapshot size must be positive")
    if (width > MAX_WIDTH or height > MAX_HEIGHT) and not allow_large:
        raise ResolutionTooLarge(
            f"{width}x{height} exceeds the 8K cap ({MAX_WIDTH}x{MAX_HEIGHT})"
        )
    params = params or PostFxParams()
    f = params.aa_factor
    needed = width * f * height * f * _BYTES_PER_PIXEL
    if needed > memory_budget:
        raise OutOfMemory(
            f"render buffers would need ~{needed / 1e9:.1f} GB "
            f"(budget {memory_budget / 1e9:.1f} GB)"
        )
    rgba = render_frame(batches, cam, width, height, params,
                        background=background, tile_size=tile_size,
                        threads=threads)
    buf = io.BytesIO()
    Image.fromarray(rgba, "RGBA").save(buf, format="PNG")
    return buf.getvalue()
