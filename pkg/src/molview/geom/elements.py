"""Element radius table used for sphere sizing.

The van der Waals radii ship as a JSON data file so they can be diffed and
cross-checked independently of the code.
"""

from __future__ import annotations

import json
from importlib import resources

import numpy as np

DEFAULT_VDW = 1.70

with resources.files(__package__).joinpath("data/vdw_radii.json").open() as _f:
    VDW_RADII: dict[str, float] = json.load(_f)


def vdw_radius(element: str) -> float:
    """Van der Waals radius in Angstrom; unknown elements fall back to 1.70."""
    return VDW_RADII.get(_normalize(element), DEFAULT_VDW)


def vdw_radii(elements) -> np.ndarray:
    """Vectorized radius lookup for an element symbol sequence."""
    table = {}
    out = np.empty(len(elements), dtype=np.float64)
    for i, el in enumerate(elements):
        r = table.get(el)
        if r is None:
            r = vdw_radius(el)
            table[el] = r
        out[i] = r
    return out


def _normalize(element: str) -> str:
    e = element.strip()
    if not e:
        return e
    return e[0].upper() + e[1:].lower()
