"""Camera state and the trackball / free-fly control operations.

Conventions: world up is +Y; camera space is right-handed with +X right,
+Y up and the view direction along -Z. Depth values are positive distances
along the view direction.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import quat

MAX_PITCH = np.radians(89.0)
WORLD_UP = np.array([0.0, 1.0, 0.0])


@dataclass
class CameraState:
    position: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 50.0]))
    orientation: np.ndarray = field(default_factory=lambda: quat.IDENTITY.copy())
    target: np.ndarray = field(default_factory=lambda: np.zeros(3))
    fov_deg: float = 60.0
    near: float = 0.1
    far: float = 10_000.0
    mode: str = "trackball"        # or "freefly"
    move_speed: float = 10.0       # Angstrom per second

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=np.float64).reshape(3)
        self.orientation = quat.normalize(self.orientation)
        self.target = np.asarray(self.target, dtype=np.float64).reshape(3)
        if not (0 < self.near < self.far):
            raise ValueError("require 0 < near < far")
        if not (1.0 < self.fov_deg < 179.0):
            raise ValueError("fov out of range")

    @property
    def forward(self) -> np.ndarray:
        return quat.rotate(self.orientation, np.array([0.0, 0.0, -1.0]))

    @property
    def right(self) -> np.ndarray:
        return quat.rotate(self.orientation, np.array([1.0, 0.0, 0.0]))

    @property
    def up(self) -> np.ndarray:
        return quat.rotate(self.orientation, np.array([0.0, 1.0, 0.0]))

    def to_dict(self) -> dict:
        return {
            "position": list(self.position),
            "orientation": list(self.orientation),
            "target": list(self.target),
            "fov_deg": self.fov_deg,
            "near": self.near,
            "far": self.far,
            "mode": self.mode,
            "move_speed": self.move_speed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CameraState":
        return cls(
            position=np.array(d["position"]),
            orientation=np.array(d["orientation"]),
            target=np.array(d["target"]),
            fov_deg=d.get("fov_deg", 60.0),
            near=d.get("near", 0.1),
            far=d.get("far", 10_000.0),
            mode=d.get("mode", "trackball"),
            move_speed=d.get("move_speed", 10.0),
        )


@dataclass
class FreeFlyInput:
    forward: bool = False
    back: bool = False
    left: bool = False
    right: bool = False
    up: bool = False
    down: bool = False
    yaw: float = 0.0      # radians, positive turns left
    pitch: float = 0.0    # radians, positive looks up
    boost: bool = False


def look_at(position, target, up=WORLD_UP) -> np.ndarray:
    """Orientation quaternion for a camera at position aimed at target."""
    fwd = np.asarray(target, dtype=np.float64) - position
    n = np.linalg.norm(fwd)
    if n < 1e-12:
        return quat.IDENTITY.copy()
    fwd = fwd / n
    right = np.cross(fwd, up)
    rn = np.linalg.norm(right)
    if rn < 1e-9:
        # looking straight up/down; pick an arbitrary horizontal right
        right = np.cross(fwd, np.array([1.0, 0.0, 0.0]))
        rn = np.linalg.norm(right)
        if rn < 1e-9:
            right = np.array([0.0, 0.0, 1.0])
            rn = 1.0
    right /= rn
    up2 = np.cross(right, fwd)
    m = np.column_stack([right, up2, -fwd])
    return quat.from_matrix(m)


def trackball_orbit(cam: CameraState, dx: float, dy: float) -> CameraState:
    """Orbit about the target: dy about the horizontal right axis (pitch,
    clamped to +-89 degrees), then dx about world up. The target distance is
    preserved by rotating the offset vector and re-adding the target."""
    offset = cam.position - cam.target
    r = np.linalg.norm(offset)
    if r < 1e-12:
        return replace(cam)

    elevation = np.arcsin(np.clip(offset @ WORLD_UP / r, -1.0, 1.0))
    new_elevation = np.clip(elevation + dy, -MAX_PITCH, MAX_PITCH)
    dy_eff = new_elevation - elevation
    axis = np.cross(WORLD_UP, offset)
    if np.linalg.norm(axis) < 1e-12:
        axis = cam.right
    if dy_eff != 0.0:
        offset = quat.rotate(quat.from_axis_angle(axis, -dy_eff), offset)
    if dx != 0.0:
        offset = quat.rotate(quat.from_axis_angle(WORLD_UP, dx), offset)

    position = cam.target + offset
    return replace(
        cam,
        position=position,
        orientation=look_at(position, cam.target),
        target=cam.target.copy(),
    )


def freefly_step(cam: CameraState, inp: FreeFlyInput, dt: float) -> CameraState:
    """First-person step: yaw about world up, pitch about the camera right
    axis, then translate along the new camera axes."""
    if dt < 0:
        raise ValueError("dt must be non-negative")
    q = cam.orientation
    if inp.yaw:
        q = quat.multiply(quat.from_axis_angle(WORLD_UP, inp.yaw), q)
    if inp.pitch:
        right = quat.rotate(q, np.array([1.0, 0.0, 0.0]))
        q = quat.multiply(quat.from_axis_angle(right, inp.pitch), q)
    q = quat.normalize(q)

    move = np.array([
        float(inp.right) - float(inp.left),
        float(inp.up) - float(inp.down),
        float(inp.back) - float(inp.forward),    # -Z is forward
    ])
    position = cam.position
    if np.any(move != 0.0):
        speed = cam.move_speed * (4.0 if inp.boost else 1.0)
        position = position + quat.rotate(q, move) * speed * dt
    return replace(cam, position=position, orientation=q, target=cam.target.copy())


def frame_scene(cam: CameraState, bounds_min, bounds_max) -> CameraState:
    """Place the camera so the box fits the vertical FOV with 10% margin."""
    bounds_min = np.asarray(bounds_min, dtype=np.float64)
    bounds_max = np.asarray(bounds_max, dtype=np.float64)
    center = 0.5 * (bounds_min + bounds_max)
    diag = float(np.linalg.norm(bounds_max - bounds_min))
    if diag < 1e-9:
        distance = 10.0
        diag = 1.0
    else:
        radius = 0.5 * diag
        distance = (radius * 1.1) / np.tan(np.radians(cam.fov_deg) / 2.0)
    fwd = cam.forward
    position = center - fwd * distance
    near = max(distance - 1.5 * diag, 1e-3)
    far = distance + 1.5 * diag
    return replace(
        cam,
        position=position,
        target=center,
        near=near,
        far=far,
        orientation=look_at(position, center),
    )
