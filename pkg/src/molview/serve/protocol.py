"""Binary wire protocol: message framing and geometry chunk packing.

A WireMessage is a 4-byte little-endian payload length, one type byte and
the payload. Geometry ships as little-endian packed arrays; sphere and
cylinder chunks carry impostor parameters (the client ray-casts them),
meshes carry vertex/index arrays. One object's chunks are sent contiguously
in index order and each chunk payload stays under 4 MiB.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import ProtocolError
from ..geom.batches import CylinderBatch, SphereBatch
from ..geom.mesh import TriMesh

PROTOCOL_VERSION = 1

MSG_HELLO = 1
MSG_SCENE_SNAPSHOT = 2
MSG_GEOMETRY_CHUNK = 3
MSG_FRAME_UPDATE = 4
MSG_SELECT = 5
MSG_REPRESENTATION = 6
MSG_CAMERA_SYNC = 7
MSG_MEASURE = 8
MSG_ERROR = 9
MSG_LOAD = 10

KIND_SPHERE = 1
KIND_CYLINDER = 2
KIND_MESH = 3

MAX_CHUNK_PAYLOAD = 4 * 1024 * 1024
CHUNK_PRIMITIVES = 65_536

_SPHERE_RECORD = 20       # 4 f32 + 4 u8
_CYLINDER_RECORD = 36     # 7 f32 + 8 u8


def encode_message(msg_type: int, payload: bytes) -> bytes:
    return struct.pack("<IB", len(payload), msg_type) + payload


def decode_message(data: bytes) -> tuple[int, bytes]:
    if len(data) < 5:
        raise ProtocolError("message shorter than its header")
    length, msg_type = struct.unpack_from("<IB", data, 0)
    if len(data) != 5 + length:
        raise ProtocolError(
            f"length field says {length} bytes, frame carries {len(data) - 5}"
        )
    return msg_type, data[5:]


# -- geometry chunks -----------------------------------------------------------


def chunk_header(object_id: int, index: int, count: int, kind: int) -> bytes:
    return struct.pack("<IIIB", object_id, index, count, kind)


def encode_sphere_chunks(batch: SphereBatch) -> list[bytes]:
    bodies = []
    per = min(CHUNK_PRIMITIVES, (MAX_CHUNK_PAYLOAD - 32) // _SPHERE_RECORD)
    for lo in range(0, len(batch), per) or [0]:
        hi = min(lo + per, len(batch))
        n = hi - lo
        rec = np.zeros(n, dtype=[("pos", "<f4", 3), ("r", "<f4"), ("rgba", "u1", 4)])
        rec["pos"] = batch.centers[lo:hi]
        rec["r"] = batch.radii[lo:hi]
        rec["rgba"] = batch.colors[lo:hi]
        bodies.append(struct.pack("<I", n) + rec.tobytes())
    return _with_headers(bodies, batch.object_id, KIND_SPHERE)


def encode_cylinder_chunks(batch: CylinderBatch) -> list[bytes]:
    bodies = []
    per = min(CHUNK_PRIMITIVES, (MAX_CHUNK_PAYLOAD - 32) // _CYLINDER_RECORD)
    for lo in range(0, len(batch), per) or [0]:
        hi = min(lo + per, len(batch))
        n = hi - lo
        rec = np.zeros(n, dtype=[("p0", "<f4", 3), ("p1", "<f4", 3), ("r", "<f4"),
                                 ("rgba", "u1", (2, 4))])
        rec["p0"] = batch.p0[lo:hi]
        rec["p1"] = batch.p1[lo:hi]
        rec["r"] = batch.radius
        rec["rgba"] = batch.colors[lo:hi]
        bodies.append(struct.pack("<I", n) + rec.tobytes())
    return _with_headers(bodies, batch.object_id, KIND_CYLINDER)


def encode_mesh_chunks(mesh: TriMesh) -> list[bytes]:
    bodies = []
    for piece in split_mesh(mesh, MAX_CHUNK_PAYLOAD - 64):
        nv = piece.n_vertices
        ni = piece.n_triangles * 3
        body = struct.pack("<II", nv, ni)
        body += piece.vertices.astype("<f4").tobytes()
        body += piece.normals.astype("<f4").tobytes()
        body += piece.colors.astype("u1").tobytes()
        body += piece.triangles.astype("<u4").tobytes()
        bodies.append(body)
    return _with_headers(bodies, mesh.object_id, KIND_MESH)


def encode_batch_chunks(batch) -> list[bytes]:
    if isinstance(batch, SphereBatch):
        return encode_sphere_chunks(batch)
    if isinstance(batch, CylinderBatch):
        return encode_cylinder_chunks(batch)
    if isinstance(batch, TriMesh):
        return encode_mesh_chunks(batch)
    raise TypeError(f"not a renderable batch: {type(batch)!r}")


def _with_headers(bodies: list[bytes], object_id: int, kind: int) -> list[bytes]:
    count = len(bodies)
    return [
        chunk_header(object_id, index, count, kind) + body
        for index, body in enumerate(bodies)
    ]


def split_mesh(mesh: TriMesh, max_bytes: int):
    """Independent sub-meshes by triangle ranges, vertices compacted."""
    if mesh.n_triangles == 0:
        yield mesh
        return
    # 40 bytes per vertex (pos+normal+color), 12 per triangle; bound the
    # triangle count pessimistically (3 unique vertices per triangle)
    per = max(int(max_bytes / (3 * 40 + 12)), 1)
    for lo in range(0, mesh.n_triangles, per):
        hi = min(lo + per, mesh.n_triangles)
        tris = mesh.triangles[lo:hi]
        used, inverse = np.unique(tris.reshape(-1), return_inverse=True)
        yield TriMesh(
            mesh.vertices[used], mesh.normals[used],
            inverse.reshape(-1, 3).astype(np.int32),
            mesh.colors[used],
            object_id=mesh.object_id, material_id=mesh.material_id,
        )


# -- reference decoding is intentionally NOT here: tests carry their own
#    independent decoder; the client implements the other one.


def parse_chunk_header(payload: bytes):
    if len(payload) < 13:
        raise ProtocolError("geometry chunk shorter than its header")
    object_id, index, count, kind = struct.unpack_from("<IIIB", payload, 0)
    return object_id, index, count, kind, payload[13:]
