"""Headless software deferred renderer."""

from .camera import (CameraState, FreeFlyInput, frame_scene, freefly_step,
                     look_at, trackball_orbit)
from .raster import DEFAULT_TILE, GBuffer, pick, rasterize
from .shading import (PostFxParams, downsample, outline_mask, post_process,
                      shade, ssao)
from .snapshot import render_frame, snapshot

__all__ = [
    "CameraState", "FreeFlyInput", "GBuffer", "PostFxParams",
    "trackball_orbit", "freefly_step", "frame_scene", "look_at",
    "rasterize", "pick", "shade", "ssao", "post_process", "downsample",
    "outline_mask", "render_frame", "snapshot", "DEFAULT_TILE",
]
