"""Scene data model: selections, representations, sessions, viewpoints."""

from .scene import (LabelItem, MoleculeItem, RepresentationSpec, SceneDocument,
                    ViewpointItem)
from .selection import Selection, evaluate, select
from .session import SCHEMA_VERSION, load_session, save_session

__all__ = [
    "SceneDocument", "MoleculeItem", "LabelItem", "ViewpointItem",
    "RepresentationSpec", "Selection", "select", "evaluate",
    "save_session", "load_session", "SCHEMA_VERSION",
]
