"""Session persistence (.mvs): JSON scene description referencing sources.

Molecule coordinates are not embedded; items store source path, format and a
content hash. Loading re-parses the files, warning (not failing) when the
hash no longer matches. Serialization is canonical (sorted keys), so
save(load(save(d))) is byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from ..errors import MissingSourceFile, SchemaMismatch
from ..molio import FormatId, detect_format, parse_structure
from ..render.camera import CameraState
from .scene import (LabelItem, MoleculeItem, RepresentationSpec, SceneDocument,
                    ViewpointItem)

SCHEMA_VERSION = 1


def save_session(doc: SceneDocument) -> bytes:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "camera": doc.active_camera.to_dict(),
        "presets": {
            name: [{"expr": e, "spec": s.to_dict()} for e, s in entries]
            for name, entries in doc.presets.items()
        },
        "items": [_item_to_dict(it) for it in doc.items],
    }
    return (json.dumps(payload, sort_keys=True, indent=1) + "\n").encode()


def load_session(data: bytes, search_dir: str | Path | None = None) -> SceneDocument:
    try:
        payload = json.loads(data.decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise SchemaMismatch(f"not a session file: {exc}") from None
    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaMismatch(f"unsupported session schema {version!r}")

    doc = SceneDocument()
    doc.active_camera = CameraState.from_dict(payload["camera"])
    doc.presets = {
        name: [(e["expr"], RepresentationSpec.from_dict(e["spec"])) for e in entries]
        for name, entries in payload.get("presets", {}).items()
    }
    for d in payload.get("items", []):
        _load_item(doc, d, search_dir)
    return doc


def _item_to_dict(it) -> dict:
    if it.kind == "molecule":
        return {
            "type": "molecule",
            "name": it.name,
            "source": {
                "path": it.source_path,
                "format": it.source_format.value if it.source_format else None,
                "sha256": it.content_hash,
            },
            "representations": [
                {"expr": e, "spec": s.to_dict()} for e, s in it.assignments
            ],
            "visible": it.visible,
        }
    if it.kind == "label":
        return {
            "type": "label", "name": it.name, "text": it.text,
            "position": list(it.position),
        }
    return {"type": "viewpoint", "name": it.name, "camera": it.camera.to_dict()}


def _load_item(doc: SceneDocument, d: dict, search_dir):
    kind = d.get("type")
    if kind == "viewpoint":
        doc.add_viewpoint(CameraState.from_dict(d["camera"]), d["name"])
        return
    if kind == "label":
        doc.add_label(d["name"], d["text"], np.asarray(d["position"]))
        return
    if kind != "molecule":
        raise SchemaMismatch(f"unknown item type {kind!r}")

    source = d.get("source") or {}
    path = source.get("path")
    if not path:
        raise MissingSourceFile(f"item {d.get('name')!r} has no source path")
    p = Path(path)
    if not p.exists() and search_dir is not None:
        p = Path(search_dir) / Path(path).name
    if not p.exists():
        raise MissingSourceFile(f"cannot find source file {path!r}")
    raw = p.read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    expected = source.get("sha256")
    if expected and digest != expected:
        doc.load_warnings.append(
            f"hash mismatch for {p.name}: session {expected[:12]}.., file {digest[:12]}.."
        )
    fmt = FormatId(source["format"]) if source.get("format") else detect_format(p.name, raw[:512])
    mol = parse_structure(raw, fmt, name=d["name"])
    mol.source_path = str(p)
    item = doc.add_molecule(mol, name=d["name"], source_path=str(p),
                            source_format=fmt, data=raw)
    item.visible = d.get("visible", True)
    for entry in d.get("representations", []):
        item.assignments.append(
            (entry["expr"], RepresentationSpec.from_dict(entry["spec"]))
        )
