"""Structure-of-arrays molecule store.

Atoms are kept in flat numpy arrays ordered by chain then residue; the
chain -> residue -> atom-range hierarchy is derived from per-atom labels by
run-length grouping, which guarantees residue ranges partition each chain.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geom.elements import vdw_radii


@dataclass
class TrajectoryFrame:
    positions: np.ndarray                 # (n, 3) Angstrom
    box: np.ndarray | None = None         # 3x3 Angstrom
    time: float | None = None             # ps

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=np.float64).reshape(-1, 3)
        if self.box is not None:
            self.box = np.asarray(self.box, dtype=np.float64).reshape(3, 3)


@dataclass(frozen=True)
class Residue:
    name: str
    seq: int
    icode: str
    start: int   # first atom index
    stop: int    # one past last atom index
    chain_index: int


@dataclass(frozen=True)
class Chain:
    id: str
    residue_indices: range   # rows of the molecule residue table


class Molecule:
    """Immutable atom store with bonds, hierarchy and optional extra frames."""

    def __init__(
        self,
        coords,
        elements,
        names=None,
        chain_ids=None,
        res_seqs=None,
        res_names=None,
        res_icodes=None,
        bonds=None,
        radii=None,
        name: str = "",
        source_path: str | None = None,
    ):
        coords = np.asarray(coords, dtype=np.float64).reshape(-1, 3)
        n = len(coords)
        self.coords = coords
        self.elements = _str_array(elements, n, "U3")
        self.names = _str_array(names if names is not None else self.elements, n, "U6")
        self.chain_ids = _str_array(chain_ids if chain_ids is not None else ["A"] * n, n, "U4")
        self.res_seqs = (
            np.asarray(res_seqs, dtype=np.int64)
            if res_seqs is not None
            else np.ones(n, dtype=np.int64)
        )
        self.res_names = _str_array(res_names if res_names is not None else ["UNK"] * n, n, "U5")
        self.res_icodes = _str_array(res_icodes if res_icodes is not None else [""] * n, n, "U1")
        self.radii = (
            np.asarray(radii, dtype=np.float64) if radii is not None else vdw_radii(self.elements)
        )
        if bonds is None or len(bonds) == 0:
            self.bonds = np.empty((0, 2), dtype=np.int64)
        else:
            self.bonds = dedupe_bonds(np.asarray(bonds, dtype=np.int64), n)
        self.name = name
        self.source_path = source_path
        self.extra_frames: list[TrajectoryFrame] = []

        self._validate()
        self._build_hierarchy()
        for arr in (self.coords, self.res_seqs, self.radii, self.bonds):
            arr.setflags(write=False)

    # -- construction helpers -------------------------------------------------

    def _validate(self):
        n = len(self.coords)
        for label, arr in (
            ("elements", self.elements), ("names", self.names),
            ("chain_ids", self.chain_ids), ("res_seqs", self.res_seqs),
            ("res_names", self.res_names), ("res_icodes", self.res_icodes),
            ("radii", self.radii),
        ):
            if len(arr) != n:
                raise ValueError(f"{label} length {len(arr)} != atom count {n}")
        if n and not np.all(np.isfinite(self.coords)):
            raise ValueError("non-finite coordinates")
        if n and not np.all(self.radii > 0):
            raise ValueError("radii must be strictly positive")

    def _build_hierarchy(self):
        n = len(self.coords)
        if n == 0:
            self._res_start = np.empty(0, dtype=np.int64)
            self._res_stop = np.empty(0, dtype=np.int64)
            self._res_chain = np.empty(0, dtype=np.int64)
            self._chain_first_res = np.empty(0, dtype=np.int64)
            self.atom_residue = np.empty(0, dtype=np.int64)
            self.atom_chain = np.empty(0, dtype=np.int64)
            return
        chain_break = np.empty(n, dtype=bool)
        chain_break[0] = True
        chain_break[1:] = self.chain_ids[1:] != self.chain_ids[:-1]
        res_break = chain_break.copy()
        res_break[1:] |= (
            (self.res_seqs[1:] != self.res_seqs[:-1])
            | (self.res_names[1:] != self.res_names[:-1])
            | (self.res_icodes[1:] != self.res_icodes[:-1])
        )
        self._res_start = np.flatnonzero(res_break)
        self._res_stop = np.append(self._res_start[1:], n)
        self.atom_residue = np.cumsum(res_break) - 1
        self.atom_chain = np.cumsum(chain_break) - 1
        self._res_chain = self.atom_chain[self._res_start]
        self._chain_first_res = np.flatnonzero(chain_break[self._res_start])

    # -- basic accessors -------------------------------------------------------

    @property
    def n_atoms(self) -> int:
        return len(self.coords)

    @property
    def n_residues(self) -> int:
        return len(self._res_start)

    @property
    def n_chains(self) -> int:
        return len(self._chain_first_res)

    @property
    def frame_count(self) -> int:
        return 1 + len(self.extra_frames)

    def positions_for_frame(self, index: int) -> np.ndarray:
        if index == 0:
            return self.coords
        return self.extra_frames[index - 1].positions

    def residue(self, index: int) -> Residue:
        start = int(self._res_start[index])
        return Residue(
            name=str(self.res_names[start]),
            seq=int(self.res_seqs[start]),
            icode=str(self.res_icodes[start]),
            start=start,
            stop=int(self._res_stop[index]),
            chain_index=int(self._res_chain[index]),
        )

    def chains(self) -> list[Chain]:
        out = []
        nres = self.n_residues
        firsts = list(self._chain_first_res) + [nres]
        for c in range(self.n_chains):
            first = int(firsts[c])
            out.append(Chain(id=str(self.chain_ids[self._res_start[first]]),
                             residue_indices=range(first, int(firsts[c + 1]))))
        return out

    def chain_atom_range(self, chain_index: int) -> tuple[int, int]:
        ch = self.chains()[chain_index]
        r = ch.residue_indices
        return int(self._res_start[r.start]), int(self._res_stop[r.stop - 1])

    def residue_atom_name_index(self, res_index: int, atom_name: str) -> int | None:
        """Index of the named atom inside a residue, or None."""
        start, stop = int(self._res_start[res_index]), int(self._res_stop[res_index])
        hits = np.flatnonzero(self.names[start:stop] == atom_name)
        return int(start + hits[0]) if len(hits) else None

    def with_bonds(self, bonds: np.ndarray) -> "Molecule":
        """Copy of this molecule with a replaced bond list."""
        m = Molecule(
            self.coords, self.elements, self.names, self.chain_ids,
            self.res_seqs, self.res_names, self.res_icodes,
            bonds=bonds, radii=self.radii, name=self.name,
            source_path=self.source_path,
        )
        m.extra_frames = list(self.extra_frames)
        return m

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        if self.n_atoms == 0:
            z = np.zeros(3)
            return z, z
        return self.coords.min(axis=0), self.coords.max(axis=0)

    def __repr__(self):
        return (f"Molecule({self.name or 'unnamed'}: {self.n_atoms} atoms, "
                f"{self.n_chains} chains, {len(self.bonds)} bonds, "
                f"{self.frame_count} frame(s))")


def dedupe_bonds(bonds: np.ndarray, n_atoms: int) -> np.ndarray:
    """Normalize to sorted unique (lo, hi) pairs, rejecting bad indices."""
    bonds = bonds.reshape(-1, 2)
    if len(bonds) == 0:
        return np.empty((0, 2), dtype=np.int64)
    if bonds.min() < 0 or bonds.max() >= n_atoms:
        raise ValueError("bond index out of range")
    lo = np.minimum(bonds[:, 0], bonds[:, 1])
    hi = np.maximum(bonds[:, 0], bonds[:, 1])
    keep = lo != hi
    lo, hi = lo[keep], hi[keep]
    return np.unique(np.stack([lo, hi], axis=1), axis=0)


def _str_array(values, n: int, dtype: str) -> np.ndarray:
    arr = np.asarray(values, dtype=dtype)
    if arr.shape != (n,):
        arr = arr.reshape(n)
    return arr
