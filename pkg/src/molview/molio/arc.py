"""Tinker archive (.arc) trajectory reader: repeated Tinker-XYZ blocks."""

from __future__ import annotations

import numpy as np

from ..errors import ParseError


class ArcReader:
    """Iterates TrajectoryFrame objects; sets .truncated on a partial block."""

    def __init__(self, data: bytes):
        self.lines = data.decode("utf-8", errors="replace").splitlines()
        self.truncated = False
        self.n_atoms = None

    def __iter__(self):
        from .molecule import TrajectoryFrame

        pos = 0
        lines = self.lines
        while pos < len(lines):
            if not lines[pos].strip():
                pos += 1
                continue
            parts = lines[pos].split()
            try:
                natoms = int(parts[0])
            except ValueError:
                raise ParseError("expected Tinker block header", offset=pos + 1) from None
            if self.n_atoms is None:
                self.n_atoms = natoms
            pos += 1
            # optional periodic box line: exactly six numbers
            if pos < len(lines):
                toks = lines[pos].split()
                if len(toks) == 6 and all(_is_float(t) for t in toks):
                    pos += 1
            if pos + natoms > len(lines):
                self.truncated = True
                return
            coords = np.empty((natoms, 3), dtype=np.float64)
            for i in range(natoms):
                toks = lines[pos + i].split()
                if len(toks) < 5:
                    self.truncated = True
                    return
                try:
                    coords[i] = [float(toks[2]), float(toks[3]), float(toks[4])]
                except ValueError as exc:
                    raise ParseError(f"bad Tinker atom line: {exc}", offset=pos + i + 1) from None
            pos += natoms
            yield TrajectoryFrame(coords)


def _is_float(tok: str) -> bool:
    try:
        float(tok)
        return True
    except ValueError:
        return False
