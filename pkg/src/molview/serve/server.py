"""Geometry streaming service.

On connect a client receives Hello, a SceneSnapshot and the geometry chunks
for every visible item. Commands mutate the scene through a single writer
queue; every mutation's results are broadcast to all clients in the same
order, so concurrent clients observe identical streams. A client whose send
queue exceeds the byte cap is dropped rather than stalling the rest.
"""

from __future__ import annotations

import asyncio
import hashlib
import json
import threading

import numpy as np

from ..errors import BindFailed, MolviewError, SelectionSyntaxError
from ..geom import (build_cartoon_mesh, build_sas_batch, build_stick_batches,
                    build_vdw_batch, build_ses_mesh)
from ..model import SceneDocument, RepresentationSpec, select
from ..molio import FormatId, detect_format, fetch_pdb, load_file, parse_structure, perceive_bonds
from ..molio.chem import AMINO_THREE_TO_ONE
from ..geom.ses import SesParams
from . import protocol as wire
from . import websocket as ws

DEFAULT_BIND = ("127.0.0.1", 9763)
SEND_QUEUE_CAP = 256 * 1024 * 1024


class ClientState:
    def __init__(self, writer):
        self.writer = writer
        self.queue: asyncio.Queue = asyncio.Queue()
        self.queued_bytes = 0
        self.alive = True


class SceneService:
    def __init__(self, doc: SceneDocument):
        self.doc = doc
        self.clients: list[ClientState] = []
        self._item_ids: dict[str, int] = {}
        self._next_id = 1
        self._frame_tasks: dict[int, asyncio.Task] = {}
        for item in doc.items:
            self._assign_id(item.name)

    # -- identity ---------------------------------------------------------------

    def _assign_id(self, name: str) -> int:
        if name not in self._item_ids:
            self._item_ids[name] = self._next_id
            self._next_id += 1
        return self._item_ids[name]

    def item_id(self, name: str) -> int:
        return self._item_ids.get(name, 0)

    def item_by_id(self, object_id: int):
        for name, oid in self._item_ids.items():
            if oid == object_id:
                return self.doc.find(name)
        return None

    # -- snapshots and geometry --------------------------------------------------

    def scene_snapshot(self) -> bytes:
        items = []
        for item in self.doc.items:
            entry = {"id": self.item_id(item.name), "name": item.name,
                     "kind": item.kind}
            if item.kind == "molecule":
                mol = item.molecule
                entry["visible"] = item.visible
                entry["counts"] = {
                    "atoms": mol.n_atoms, "bonds": int(len(mol.bonds)),
                    "chains": mol.n_chains, "residues": mol.n_residues,
                    "frames": mol.frame_count,
                }
                entry["chains"] = [
                    {"id": ch.id, "sequence": _one_letter_sequence(mol, ch),
                     "resids": [mol.residue(r).seq for r in ch.residue_indices]}
                    for ch in mol.chains()
                ]
                entry["representations"] = [
                    {"expr": e, "spec": s.to_dict()} for e, s in item.assignments
                ]
            elif item.kind == "label":
                entry["text"] = item.text
                entry["position"] = list(item.position)
            else:
                entry["camera"] = item.camera.to_dict()
            items.append(entry)
        payload = {"items": items, "camera": self.doc.active_camera.to_dict()}
        return json.dumps(payload, sort_keys=True).encode()

    def scene_hash(self) -> bytes:
        return hashlib.sha256(self.scene_snapshot()).digest()[:8]

    def hello_message(self) -> bytes:
        payload = wire.PROTOCOL_VERSION.to_bytes(4, "little") + self.scene_hash()
        return wire.encode_message(wire.MSG_HELLO, payload)

    def geometry_messages(self) -> list[bytes]:
        out = []
        for item in self.doc.molecule_items():
            if not item.visible:
                continue
            out.extend(self.item_geometry(item))
        return out

    def item_geometry(self, item) -> list[bytes]:
        mol = item.molecule
        oid = self._assign_id(item.name)
        msgs = []
        for spec, idx in self.doc.effective_representations(item):
            for batch in _build_batches(mol, idx, spec, oid):
                for chunk in wire.encode_batch_chunks(batch):
                    msgs.append(wire.encode_message(wire.MSG_GEOMETRY_CHUNK, chunk))
        return msgs

    # -- broadcasting -------------------------------------------------------------

    def broadcast(self, messages: list[bytes]):
        for client in list(self.clients):
            if not client.alive:
                continue
            for m in messages:
                client.queued_bytes += len(m)
                client.queue.put_nowait(m)
            if client.queued_bytes > SEND_QUEUE_CAP:
                client.alive = False
                client.queue.put_nowait(None)

    # -- command handling ----------------------------------------------------------

    def handle_command(self, msg_type: int, payload: bytes) -> list[bytes]:
        """Apply one client command; returns the messages to broadcast."""
        try:
            if msg_type == wire.MSG_SELECT:
                return self._cmd_select(payload)
            if msg_type == wire.MSG_REPRESENTATION:
                return self._cmd_representation(payload)
            if msg_type == wire.MSG_LOAD:
                return self._cmd_load(payload)
            if msg_type == wire.MSG_CAMERA_SYNC:
                return [wire.encode_message(wire.MSG_CAMERA_SYNC, payload)]
            if msg_type == wire.MSG_MEASURE:
                return self._cmd_measure(payload)
            if msg_type == wire.MSG_HELLO:
                version = int.from_bytes(payload[:4], "little")
                if version != wire.PROTOCOL_VERSION:
                    raise _CloseAfter(
                        _error_message(f"protocol version {version} unsupported, "
                                       f"server speaks {wire.PROTOCOL_VERSION}")
                    )
                return []
            return [_error_message(f"unknown message type {msg_type}")]
        except _CloseAfter:
            raise
        except SelectionSyntaxError as exc:
            return [_error_message(str(exc), caret=exc.caret)]
        except MolviewError as exc:
            return [_error_message(str(exc))]
        except Exception as exc:   # command errors never kill the service
            return [_error_message(f"{type(exc).__name__}: {exc}")]

    def _molecule_for(self, object_id: int):
        item = self.item_by_id(object_id)
        if item is None or item.kind != "molecule":
            raise MolviewError(f"no molecule with object id {object_id}")
        return item

    def _cmd_select(self, payload: bytes) -> list[bytes]:
        oid = int.from_bytes(payload[:4], "little")
        expr = payload[4:].decode()
        item = self._molecule_for(oid)
        sel = select(item.molecule, expr, item.name)
        body = (oid.to_bytes(4, "little")
                + len(sel.atom_indices).to_bytes(4, "little")
                + np.asarray(sel.atom_indices, dtype="<u4").tobytes()
                + expr.encode())
        return [wire.encode_message(wire.MSG_SELECT, body)]

    def _cmd_representation(self, payload: bytes) -> list[bytes]:
        oid = int.from_bytes(payload[:4], "little")
        body = json.loads(payload[4:].decode())
        item = self._molecule_for(oid)
        if "visible" in body:
            item.visible = bool(body["visible"])
        if "expr" in body and "spec" in body:
            spec = RepresentationSpec.from_dict(body["spec"])
            if spec.kind in ("sticks", "ball_and_stick") and not len(item.molecule.bonds):
                item.molecule = item.molecule.with_bonds(perceive_bonds(item.molecule))
            sel = select(item.molecule, body["expr"], item.name)
            self.doc.assign_representation(sel, spec)
        msgs = [wire.encode_message(wire.MSG_SCENE_SNAPSHOT, self.scene_snapshot())]
        if item.visible:
            msgs.extend(self.item_geometry(item))
        return msgs

    def _cmd_load(self, payload: bytes) -> list[bytes]:
        body = json.loads(payload.decode())
        if "pdb_id" in body:
            data, fmt = fetch_pdb(body["pdb_id"])
            mol = parse_structure(data, fmt, name=body["pdb_id"].lower())
            item = self.doc.add_molecule(mol, source_format=fmt, data=data)
        else:
            mol = load_file(body["path"])
            item = self.doc.add_molecule(mol)
        self._assign_id(item.name)
        msgs = [wire.encode_message(wire.MSG_SCENE_SNAPSHOT, self.scene_snapshot())]
        msgs.extend(self.item_geometry(item))
        return msgs

    def _cmd_measure(self, payload: bytes) -> list[bytes]:
        from ..analyze import measure_angle, measure_distance

        body = json.loads(payload.decode())
        item = self._molecule_for(int(body["id"]))
        atoms = [int(a) for a in body["atoms"]]
        if len(atoms) == 2:
            value = measure_distance(item.molecule, *atoms)
            kind = "distance"
        elif len(atoms) == 3:
            value = measure_angle(item.molecule, *atoms)
            kind = "angle"
        else:
            raise MolviewError("measure takes 2 or 3 atom indices")
        out = json.dumps({"id": body["id"], "atoms": atoms, "kind": kind,
                          "value": value}).encode()
        return [wire.encode_message(wire.MSG_MEASURE, out)]

    def frame_update_messages(self, object_id: int, frame_index: int) -> list[bytes]:
        item = self._molecule_for(object_id)
        pos = item.molecule.positions_for_frame(frame_index % item.molecule.frame_count)
        body = (object_id.to_bytes(4, "little")
                + (frame_index % item.molecule.frame_count).to_bytes(4, "little")
                + len(pos).to_bytes(4, "little")
                + np.asarray(pos, dtype="<f4").tobytes())
        return [wire.encode_message(wire.MSG_FRAME_UPDATE, body)]


class _CloseAfter(Exception):
    def __init__(self, message: bytes):
        self.message = message


def _error_message(text: str, caret: int | None = None) -> bytes:
    body = {"message": text}
    if caret is not None:
        body["caret"] = caret
    return wire.encode_message(wire.MSG_ERROR, json.dumps(body).encode())


def _one_letter_sequence(mol, chain) -> str:
    out = []
    for r in chain.residue_indices:
        name = str(mol.res_names[mol._res_start[r]]).upper()
        out.append(AMINO_THREE_TO_ONE.get(name, "X"))
    return "".join(out)


def _build_batches(mol, idx, spec, object_id):
    kind = spec.kind
    if kind == "vdw":
        return [build_vdw_batch(mol, idx, spec, object_id)]
    if kind == "sas":
        return [build_sas_batch(mol, idx, spec, object_id)]
    if kind in ("sticks", "ball_and_stick"):
        spheres, cylinders = build_stick_batches(
            mol, idx, spec, object_id, ball_and_stick=(kind == "ball_and_stick")
        )
        return [spheres, cylinders]
    if kind == "ses":
        params = SesParams(spec.probe_radius, spec.ses_grid_spacing)
        return [build_ses_mesh(mol, idx, params, spec, object_id)]
    if kind == "cartoon":
        return [build_cartoon_mesh(mol, idx, lod=spec.cartoon_lod,
                                   object_id=object_id)]
    raise MolviewError(f"unknown representation kind {kind!r}")


# -- asyncio server --------------------------------------------------------------


class ServeHandle:
    """Running service; stop() shuts it down. Usable from tests and the CLI."""

    def __init__(self, service: SceneService, host: str, port: int, loop, thread):
        self.service = service
        self.host = host
        self.port = port
        self._loop = loop
        self._thread = thread

    def stop(self):
        self._loop.call_soon_threadsafe(self._loop.stop)
        self._thread.join(timeout=10)

    def wait(self):
        """Block until the service is stopped (for CLI foreground use)."""
        self._thread.join()


async def _client_session(service: SceneService, reader, writer):
    try:
        await ws.server_handshake(reader, writer)
    except (ws.WebSocketClosed, asyncio.IncompleteReadError, ConnectionError):
        writer.close()
        return
    client = ClientState(writer)
    service.clients.append(client)

    async def sender():
        while True:
            msg = await client.queue.get()
            if msg is None:
                break
            client.queued_bytes -= len(msg)
            try:
                await ws.send_binary(writer, msg)
            except (ConnectionError, asyncio.CancelledError):
                break

    send_task = asyncio.get_event_loop().create_task(sender())

    # initial stream: hello, snapshot, all geometry
    hello = service.hello_message()
    snapshot = wire.encode_message(wire.MSG_SCENE_SNAPSHOT, service.scene_snapshot())
    for m in [hello, snapshot] + service.geometry_messages():
        client.queued_bytes += len(m)
        client.queue.put_nowait(m)

    try:
        while client.alive:
            opcode, data = await ws.read_frame(reader)
            if opcode == ws.OP_CLOSE:
                break
            if opcode == ws.OP_PING:
                writer.write(ws.encode_frame(ws.OP_PONG, data, mask=False))
                await writer.drain()
                continue
            if opcode not in (ws.OP_BINARY, ws.OP_TEXT):
                continue
            try:
                msg_type, payload = wire.decode_message(data)
            except MolviewError as exc:
                client.queue.put_nowait(_error_message(str(exc)))
                continue
            if msg_type == wire.MSG_FRAME_UPDATE:
                # client requests frame n of an object
                oid = int.from_bytes(payload[:4], "little")
                n = int.from_bytes(payload[4:8], "little")
                try:
                    service.broadcast(service.frame_update_messages(oid, n))
                except MolviewError as exc:
                    client.queue.put_nowait(_error_message(str(exc)))
                continue
            try:
                replies = service.handle_command(msg_type, payload)
            except _CloseAfter as stop:
                client.queue.put_nowait(stop.message)
                break
            service.broadcast(replies)
    except (ws.WebSocketClosed, ConnectionError, asyncio.IncompleteReadError):
        pass
    finally:
        client.alive = False
        client.queue.put_nowait(None)
        await send_task
        if client in service.clients:
            service.clients.remove(client)
        try:
            await ws.send_close(writer)
            writer.close()
        except (ConnectionError, RuntimeError):
            pass


def serve(doc: SceneDocument, bind: tuple[str, int] = DEFAULT_BIND,
          background: bool = True) -> ServeHandle:
    """Start the service; with background=True it runs on a daemon thread."""
    service = SceneService(doc)
    loop = asyncio.new_event_loop()
    started = threading.Event()
    box: dict = {}

    async def boot():
        try:
            server = await asyncio.start_server(
                lambda r, w: _client_session(service, r, w),
                host=bind[0], port=bind[1],
            )
        except OSError as exc:
            box["error"] = BindFailed(f"cannot bind {bind[0]}:{bind[1]}: {exc}")
            started.set()
            return
        box["server"] = server
        box["port"] = server.sockets[0].getsockname()[1]
        started.set()

    def run():
        asyncio.set_event_loop(loop)
        loop.run_until_complete(boot())
        if "error" not in box:
            loop.run_forever()

    if not background:
        raise NotImplementedError("foreground serving is CLI-only")
    thread = threading.Thread(target=run, daemon=True)
    thread.start()
    started.wait(timeout=10)
    if "error" in box:
        thread.join(timeout=5)
        raise box["error"]
    return ServeHandle(service, bind[0], box["port"], loop, thread)
