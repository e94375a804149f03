"""Triangle mesh container and OBJ debug export."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class TriMesh:
    vertices: np.ndarray                    # (n, 3) Angstrom
    normals: np.ndarray                     # (n, 3) unit
    triangles: np.ndarray                   # (m, 3) int32
    colors: np.ndarray | None = None        # (n, 4) uint8
    object_id: int = 0
    material_id: int = 1

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3)
        self.normals = np.asarray(self.normals, dtype=np.float64).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int32).reshape(-1, 3)
        if self.colors is None:
            self.colors = np.full((len(self.vertices), 4), 255, dtype=np.uint8)
        else:
            self.colors = np.asarray(self.colors, dtype=np.uint8).reshape(-1, 4)
        if len(self.triangles) and (
            self.triangles.min() < 0 or self.triangles.max() >= len(self.vertices)
        ):
            raise ValueError("triangle index out of range")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def area(self) -> float:
        a = self.vertices[self.triangles[:, 0]]
        b = self.vertices[self.triangles[:, 1]]
        c = self.vertices[self.triangles[:, 2]]
        return float(0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1).sum())

    def edge_use_counts(self) -> dict[tuple[int, int], int]:
        """How many triangles use each undirected edge (watertight => all 2)."""
        counts: dict[tuple[int, int], int] = {}
        for tri in self.triangles:
            for k in range(3):
                a, b = int(tri[k]), int(tri[(k + 1) % 3])
                key = (a, b) if a < b else (b, a)
                counts[key] = counts.get(key, 0) + 1
        return counts

    def connected_components(self) -> int:
        """Number of vertex-connected components among used vertices."""
        if self.n_triangles == 0:
            return 0
        parent = np.arange(self.n_vertices)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for tri in self.triangles:
            a = find(int(tri[0]))
            for k in (1, 2):
                b = find(int(tri[k]))
                if a != b:
                    parent[b] = a
        used = np.unique(self.triangles)
        return len({find(int(v)) for v in used})

    def merged_with(self, other: "TriMesh") -> "TriMesh":
        off = self.n_vertices
        return TriMesh(
            np.vstack([self.vertices, other.vertices]),
            np.vstack([self.normals, other.normals]),
            np.vstack([self.triangles, other.triangles + off]),
            np.vstack([self.colors, other.colors]),
            object_id=self.object_id,
            material_id=self.material_id,
        )


def to_obj(mesh: TriMesh) -> str:
    lines = ["# molview mesh dump"]
    for v in mesh.vertices:
        lines.append("v %.6f %.6f %.6f" % tuple(v))
    for n in mesh.normals:
        lines.append("vn %.6f %.6f %.6f" % tuple(n))
    for t in mesh.triangles:
        a, b, c = (int(x) + 1 for x in t)
        lines.append(f"f {a}//{a} {b}//{b} {c}//{c}")
    return "\n".join(lines) + "\n"


def empty_mesh(object_id: int = 0) -> TriMesh:
    return TriMesh(
        np.empty((0, 3)), np.empty((0, 3)), np.empty((0, 3), dtype=np.int32),
        np.empty((0, 4), dtype=np.uint8), object_id=object_id,
    )
