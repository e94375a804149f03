"""DCD trajectory reader/writer.

The file is a sequence of Fortran unformatted records (4-byte length, payload,
4-byte length). Endianness is detected from the leading header record length
(84). Each frame holds X, Y and Z float32 records, preceded by a 48-byte unit
cell record when the header's crystal flag is set.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import ParseError, TruncatedFrame


class DcdReader:
    """Iterates TrajectoryFrame objects; sets .truncated on a partial tail."""

    def __init__(self, data: bytes):
        self.data = data
        self.truncated = False
        self._pos = 0
        self._parse_header()

    def _record(self):
        """Read one Fortran record; None at clean EOF, raises inside a record."""
        if self._pos == len(self.data):
            return None
        if self._pos + 4 > len(self.data):
            raise TruncatedFrame("dangling bytes at end of DCD")
        (n,) = struct.unpack_from(self.endian + "i", self.data, self._pos)
        end = self._pos + 4 + n + 4
        if n < 0 or end > len(self.data):
            raise TruncatedFrame("truncated DCD record")
        payload = self.data[self._pos + 4:self._pos + 4 + n]
        (n2,) = struct.unpack_from(self.endian + "i", self.data, self._pos + 4 + n)
        if n2 != n:
            raise ParseError("mismatched DCD record markers", offset=self._pos, unit="byte")
        self._pos = end
        return payload

    def _parse_header(self):
        if len(self.data) < 8:
            raise ParseError("not a DCD file (too short)", offset=0, unit="byte")
        (first_le,) = struct.unpack_from("<i", self.data, 0)
        (first_be,) = struct.unpack_from(">i", self.data, 0)
        if first_le == 84:
            self.endian = "<"
        elif first_be == 84:
            self.endian = ">"
        else:
            raise ParseError("leading record length is not 84", offset=0, unit="byte")
        header = self._record()
        if header[:4] != b"CORD":
            raise ParseError("missing CORD magic", offset=4, unit="byte")
        icntrl = struct.unpack(self.endian + "20i", header[4:84])
        self.n_frames_declared = icntrl[0]
        self.has_cell = icntrl[10] != 0
        self._record()  # titles
        natoms_rec = self._record()
        if natoms_rec is None or len(natoms_rec) != 4:
            raise ParseError("missing atom count record", offset=self._pos, unit="byte")
        (self.n_atoms,) = struct.unpack(self.endian + "i", natoms_rec)

    def __iter__(self):
        from .molecule import TrajectoryFrame

        while True:
            try:
                first = self._record()
            except TruncatedFrame:
                self.truncated = True
                return
            if first is None:
                return
            try:
                box = None
                if self.has_cell:
                    if len(first) != 48:
                        raise TruncatedFrame("bad unit cell record size")
                    a, _, b, _, _, c = struct.unpack(self.endian + "6d", first)
                    box = np.diag([a, b, c])
                    xrec = self._record()
                else:
                    xrec = first
                yrec = self._record()
                zrec = self._record()
                if xrec is None or yrec is None or zrec is None:
                    raise TruncatedFrame("frame ended early")
                expected = 4 * self.n_atoms
                if len(xrec) != expected or len(yrec) != expected or len(zrec) != expected:
                    raise TruncatedFrame("coordinate record size mismatch")
            except TruncatedFrame:
                self.truncated = True
                return
            dt = self.endian + "f4"
            positions = np.column_stack([
                np.frombuffer(xrec, dtype=dt),
                np.frombuffer(yrec, dtype=dt),
                np.frombuffer(zrec, dtype=dt),
            ]).astype(np.float64)
            yield TrajectoryFrame(positions, box=box)


def write_dcd(frames) -> bytes:
    """Serialize frames (little-endian, CHARMM-style header)."""
    frames = list(frames)
    n_atoms = len(frames[0].positions) if frames else 0
    has_cell = any(f.box is not None for f in frames)

    def record(payload: bytes) -> bytes:
        return struct.pack("<i", len(payload)) + payload + struct.pack("<i", len(payload))

    icntrl = [0] * 20
    icntrl[0] = len(frames)
    icntrl[1] = 1          # first step
    icntrl[2] = 1          # save frequency
    icntrl[3] = len(frames)
    icntrl[9] = int.from_bytes(struct.pack("<f", 1.0), "little", signed=True)
    icntrl[10] = 1 if has_cell else 0
    icntrl[19] = 24        # CHARMM version tag
    out = [record(b"CORD" + struct.pack("<20i", *icntrl))]
    title = b"written by molview".ljust(80)
    out.append(record(struct.pack("<i", 1) + title))
    out.append(record(struct.pack("<i", n_atoms)))

    for f in frames:
        pos = np.asarray(f.positions, dtype=np.float32)
        if len(pos) != n_atoms:
            raise ValueError("all DCD frames must have the same atom count")
        if has_cell:
            if f.box is not None:
                a, b, c = np.diag(np.asarray(f.box, dtype=np.float64))
            else:
                a = b = c = 0.0
            out.append(record(struct.pack("<6d", a, 90.0, b, 90.0, 90.0, c)))
        for axis in range(3):
            out.append(record(pos[:, axis].astype("<f4").tobytes()))
    return b"".join(out)
