"""Scene document: items, representation assignments, presets, viewpoints."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import DanglingSelection, DuplicateName
from ..molio import FormatId, Molecule
from ..render.camera import CameraState
from .selection import Selection, select

REPRESENTATION_KINDS = ("sticks", "ball_and_stick", "vdw", "sas", "ses", "cartoon")
COLOR_MODES = ("element", "chain", "flat")


@dataclass(frozen=True)
class RepresentationSpec:
    kind: str = "vdw"
    color_mode: str = "element"
    flat_rgb: tuple = (200, 200, 200)
    stick_radius: float = 0.15
    ball_scale: float = 0.3
    probe_radius: float = 1.4
    ses_grid_spacing: float = 0.4
    cartoon_lod_bias: int = 0          # added to the base of 8, clamped 2..16

    def __post_init__(self):
        if self.kind not in REPRESENTATION_KINDS:
            raise ValueError(f"unknown representation {self.kind!r}")
        if self.color_mode not in COLOR_MODES:
            raise ValueError(f"unknown color mode {self.color_mode!r}")
        if min(self.stick_radius, self.probe_radius, self.ses_grid_spacing) <= 0:
            raise ValueError("radii and spacings must be positive")
        if not (0.0 < self.ball_scale <= 1.0):
            raise ValueError("ball_scale must be in (0, 1]")

    @property
    def cartoon_lod(self) -> int:
        return int(np.clip(8 + self.cartoon_lod_bias, 2, 16))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind, "color_mode": self.color_mode,
            "flat_rgb": list(self.flat_rgb), "stick_radius": self.stick_radius,
            "ball_scale": self.ball_scale, "probe_radius": self.probe_radius,
            "ses_grid_spacing": self.ses_grid_spacing,
            "cartoon_lod_bias": self.cartoon_lod_bias,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RepresentationSpec":
        return cls(
            kind=d["kind"], color_mode=d["color_mode"],
            flat_rgb=tuple(d.get("flat_rgb", (200, 200, 200))),
            stick_radius=d.get("stick_radius", 0.15),
            ball_scale=d.get("ball_scale", 0.3),
            probe_radius=d.get("probe_radius", 1.4),
            ses_grid_spacing=d.get("ses_grid_spacing", 0.4),
            cartoon_lod_bias=d.get("cartoon_lod_bias", 0),
        )


@dataclass
class MoleculeItem:
    name: str
    molecule: Molecule
    source_path: str | None = None
    source_format: FormatId | None = None
    content_hash: str | None = None
    assignments: list = field(default_factory=list)   # [(expression, spec)]
    visible: bool = True

    kind = "molecule"


@dataclass
class LabelItem:
    name: str
    text: str
    position: np.ndarray

    kind = "label"


@dataclass
class ViewpointItem:
    name: str
    camera: CameraState

    kind = "viewpoint"


class SceneDocument:
    """Ordered scene items with unique names plus camera state and presets."""

    def __init__(self):
        self.items: list = []
        self.active_camera = CameraState()
        self.presets: dict[str, list] = {}
        self.load_warnings: list[str] = []

    # -- items -----------------------------------------------------------------

    def _check_name(self, name: str):
        if any(it.name == name for it in self.items):
            raise DuplicateName(f"scene already has an item named {name!r}")

    def add_molecule(self, mol: Molecule, name: str | None = None,
                     source_path: str | None = None,
                     source_format: FormatId | None = None,
                     data: bytes | None = None) -> MoleculeItem:
        name = name or mol.name or f"molecule{len(self.items)}"
        self._check_name(name)
        item = MoleculeItem(
            name=name, molecule=mol,
            source_path=source_path or mol.source_path,
            source_format=source_format,
            content_hash=hashlib.sha256(data).hexdigest() if data is not None else None,
        )
        self.items.append(item)
        return item

    def add_label(self, name: str, text: str, position) -> LabelItem:
        self._check_name(name)
        item = LabelItem(name, text, np.asarray(position, dtype=np.float64))
        self.items.append(item)
        return item

    def add_viewpoint(self, camera: CameraState, name: str) -> ViewpointItem:
        self._check_name(name)
        item = ViewpointItem(name, replace(camera))
        self.items.append(item)
        return item

    def recall_viewpoint(self, name: str) -> CameraState:
        for it in self.items:
            if it.kind == "viewpoint" and it.name == name:
                self.active_camera = replace(it.camera)
                return self.active_camera
        raise KeyError(f"no viewpoint named {name!r}")

    def remove_item(self, name: str):
        self.items = [it for it in self.items if it.name != name]

    def molecule_items(self) -> list[MoleculeItem]:
        return [it for it in self.items if it.kind == "molecule"]

    def find(self, name: str):
        for it in self.items:
            if it.name == name:
                return it
        return None

    # -- representations ---------------------------------------------------------

    def assign_representation(self, sel: Selection, spec: RepresentationSpec):
        """Later assignments override earlier ones on the atoms they cover."""
        item = self.find(sel.molecule)
        if item is None or item.kind != "molecule":
            raise DanglingSelection(f"no molecule named {sel.molecule!r} in scene")
        if len(sel) == 0:
            return self
        item.assignments.append((sel.source_expression, spec))
        return self

    def effective_representations(self, item: MoleculeItem):
        """Resolved per-atom specs as [(spec, atom_indices)] groups.

        Atoms no assignment covers fall back to the default: cartoon for
        polymer chains with at least 2 amino residues, sticks otherwise.
        """
        mol = item.molecule
        n = mol.n_atoms
        owner = np.full(n, -1, dtype=np.int64)
        specs = []
        for expr, spec in item.assignments:
            mask = select(mol, expr, item.name).atom_indices
            owner[mask] = len(specs)
            specs.append(spec)

        groups = []
        for k, spec in enumerate(specs):
            idx = np.flatnonzero(owner == k)
            if len(idx):
                groups.append((spec, idx))
        rest = np.flatnonzero(owner < 0)
        if len(rest):
            groups.extend(_default_groups(mol, rest))
        return groups


def _default_groups(mol: Molecule, rest: np.ndarray):
    from ..molio.chem import AMINO_THREE_TO_ONE

    cartoon_chains = set()
    for ci, chain in enumerate(mol.chains()):
        amino = sum(
            1 for r in chain.residue_indices
            if str(mol.res_names[mol._res_start[r]]).upper() in AMINO_THREE_TO_ONE
        )
        if amino >= 2:
            cartoon_chains.add(ci)
    in_cartoon = np.isin(mol.atom_chain[rest], sorted(cartoon_chains))
    out = []
    if in_cartoon.any():
        out.append((RepresentationSpec(kind="cartoon"), rest[in_cartoon]))
    if (~in_cartoon).any():
        out.append((RepresentationSpec(kind="sticks"), rest[~in_cartoon]))
    return out
