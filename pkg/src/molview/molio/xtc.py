"""XTC trajectory reader/writer.

Implements the XDR container (big-endian) and the 3dfcoord compressed
coordinate scheme: coordinates are quantized to integers at the requested
precision, the first atom of each run is stored against the frame bounding
box, and subsequent atoms are stored as small deltas in a mixed-radix code
whose cell size adapts via the magic-number ladder below. Frames with nine
atoms or fewer are stored as plain floats, as in the reference format.

Coordinates are nanometers on the wire and Angstrom in memory.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import ParseError, TruncatedFrame

XTC_MAGIC = 1995
ANG_PER_NM = 10.0

MAGICINTS = (
    0, 0, 0, 0, 0, 0, 0, 0, 0, 8,
    10, 12, 16, 20, 25, 32, 40, 50, 64, 80,
    101, 128, 161, 203, 256, 322, 406, 512, 645, 812,
    1024, 1290, 1625, 2048, 2580, 3250, 4096, 5060, 6501, 8192,
    10321, 13003, 16384, 20642, 26007, 32768, 41285, 52015, 65536, 82570,
    104031, 131072, 165140, 208063, 262144, 330280, 416127, 524287, 660561, 832255,
    1048576, 1321122, 1664510, 2097152, 2642245, 3329021, 4194304, 5284491, 6658042, 8388607,
    10568983, 13316085, 16777216,
)
FIRSTIDX = 9
LASTIDX = len(MAGICINTS)


class _BitWriter:
    def __init__(self):
        self.buf = bytearray()
        self._acc = 0
        self._nbits = 0

    def put(self, nbits: int, value: int):
        if nbits == 0:
            return
        self._acc = (self._acc << nbits) | (value & ((1 << nbits) - 1))
        self._nbits += nbits
        while self._nbits >= 8:
            self._nbits -= 8
            self.buf.append((self._acc >> self._nbits) & 0xFF)
        self._acc &= (1 << self._nbits) - 1

    def getvalue(self) -> bytes:
        out = bytes(self.buf)
        if self._nbits:
            out += bytes([(self._acc << (8 - self._nbits)) & 0xFF])
        return out


class _BitReader:
    def __init__(self, data: bytes):
        self.data = data
        self._pos = 0
        self._acc = 0
        self._nbits = 0

    def get(self, nbits: int) -> int:
        if nbits == 0:
            return 0
        while self._nbits < nbits:
            if self._pos >= len(self.data):
                raise TruncatedFrame("bit stream exhausted")
            self._acc = (self._acc << 8) | self.data[self._pos]
            self._pos += 1
            self._nbits += 8
        self._nbits -= nbits
        val = (self._acc >> self._nbits) & ((1 << nbits) - 1)
        self._acc &= (1 << self._nbits) - 1
        return val


def _send_ints(bw: _BitWriter, nbits: int, sizes, nums):
    v = (nums[0] * sizes[1] + nums[1]) * sizes[2] + nums[2]
    digits = []
    while v:
        digits.append(v & 0xFF)
        v >>= 8
    if not digits:
        digits = [0]
    nbytes = len(digits)
    if nbits >= nbytes * 8:
        for d in digits:
            bw.put(8, d)
        bw.put(nbits - nbytes * 8, 0)
    else:
        for d in digits[:-1]:
            bw.put(8, d)
        bw.put(nbits - (nbytes - 1) * 8, digits[-1])


def _recv_ints(br: _BitReader, nbits: int, sizes):
    v = 0
    shift = 0
    while nbits > 8:
        v |= br.get(8) << shift
        shift += 8
        nbits -= 8
    if nbits > 0:
        v |= br.get(nbits) << shift
    n2 = v % sizes[2]
    v //= sizes[2]
    n1 = v % sizes[1]
    n0 = v // sizes[1]
    return [n0, n1, n2]


def _compress_frame(ints: np.ndarray, bw: _BitWriter):
    """3dfcoord body after the precision field; returns header ints to emit."""
    natoms = len(ints)
    minint = ints.min(axis=0).tolist()
    maxint = ints.max(axis=0).tolist()
    sizeint = [maxint[k] - minint[k] + 1 for k in range(3)]

    if any(s > 0xFFFFFF for s in sizeint):
        bitsizeint = [s.bit_length() for s in sizeint]
        bitsize = 0
    else:
        bitsizeint = [0, 0, 0]
        bitsize = (sizeint[0] * sizeint[1] * sizeint[2]).bit_length()

    if natoms >= 2:
        mindiff = int(np.abs(np.diff(ints, axis=0)).sum(axis=1).min())
    else:
        mindiff = 0
    smallidx = FIRSTIDX
    while smallidx < LASTIDX - 1 and MAGICINTS[smallidx] < mindiff:
        smallidx += 1

    header = (minint, maxint, smallidx)

    maxidx = min(LASTIDX - 1, smallidx + 8)
    minidx = maxidx - 8
    smaller = MAGICINTS[max(FIRSTIDX, smallidx - 1)] // 2
    smallnum = MAGICINTS[smallidx] // 2
    sizesmall = [MAGICINTS[smallidx]] * 3

    coords = ints.tolist()
    prevcoord = [0, 0, 0]
    prevrun = -1
    i = 0
    while i < natoms:
        is_small = 0
        this = coords[i]
        larger = MAGICINTS[maxidx] // 2
        if smallidx < maxidx and i >= 1 and all(
            abs(this[k] - prevcoord[k]) < larger for k in range(3)
        ):
            is_smaller = 1
        elif smallidx > minidx:
            is_smaller = -1
        else:
            is_smaller = 0
        if i + 1 < natoms and all(
            abs(this[k] - coords[i + 1][k]) < smallnum for k in range(3)
        ):
            # swap so the run header sits on the second atom; improves
            # delta coding of e.g. water oxygens vs hydrogens
            coords[i], coords[i + 1] = coords[i + 1], coords[i]
            this = coords[i]
            is_small = 1

        if bitsize == 0:
            for k in range(3):
                bw.put(bitsizeint[k], this[k] - minint[k])
        else:
            _send_ints(bw, bitsize, sizeint, [this[k] - minint[k] for k in range(3)])
        prevcoord = list(this)
        i += 1

        run = 0
        if is_small == 0 and is_smaller == -1:
            is_smaller = 0
        run_values = []
        while is_small and run < 8 * 3:
            nxt = coords[i]
            if is_smaller == -1 and sum(
                (nxt[k] - prevcoord[k]) ** 2 for k in range(3)
            ) >= smaller * smaller:
                is_smaller = 0
            run_values.append([nxt[k] - prevcoord[k] + smallnum for k in range(3)])
            run += 3
            prevcoord = list(nxt)
            i += 1
            is_small = 0
            if i < natoms and all(
                abs(coords[i][k] - prevcoord[k]) < smallnum for k in range(3)
            ):
                is_small = 1

        if run != prevrun or is_smaller != 0:
            prevrun = run
            bw.put(1, 1)
            bw.put(5, run + is_smaller + 1)
        else:
            bw.put(1, 0)
        for triple in run_values:
            _send_ints(bw, smallidx, sizesmall, triple)
        if is_smaller != 0:
            smallidx += is_smaller
            if is_smaller < 0:
                smallnum = smaller
                smaller = MAGICINTS[smallidx - 1] // 2 if smallidx > FIRSTIDX else 0
            else:
                smaller = smallnum
                smallnum = MAGICINTS[smallidx] // 2
            sizesmall = [MAGICINTS[smallidx]] * 3
    return header


def _decompress_frame(br: _BitReader, natoms: int, minint, maxint, smallidx) -> np.ndarray:
    sizeint = [maxint[k] - minint[k] + 1 for k in range(3)]
    if any(s > 0xFFFFFF for s in sizeint):
        bitsizeint = [s.bit_length() for s in sizeint]
        bitsize = 0
    else:
        bitsizeint = [0, 0, 0]
        bitsize = (sizeint[0] * sizeint[1] * sizeint[2]).bit_length()

    maxidx = min(LASTIDX - 1, smallidx + 8)
    smaller = MAGICINTS[max(FIRSTIDX, smallidx - 1)] // 2
    smallnum = MAGICINTS[smallidx] // 2
    sizesmall = [MAGICINTS[smallidx]] * 3

    out = np.empty((natoms, 3), dtype=np.int64)
    run = 0
    i = 0
    while i < natoms:
        if bitsize == 0:
            this = [br.get(bitsizeint[k]) for k in range(3)]
        else:
            this = _recv_ints(br, bitsize, sizeint)
        this = [this[k] + minint[k] for k in range(3)]
        prevcoord = list(this)
        write_at = i
        i += 1

        flag = br.get(1)
        is_smaller = 0
        if flag:
            run = br.get(5)
            is_smaller = run % 3
            run -= is_smaller
            is_smaller -= 1
        if run > 0:
            for k in range(0, run, 3):
                triple = _recv_ints(br, smallidx, sizesmall)
                triple = [triple[d] + prevcoord[d] - smallnum for d in range(3)]
                if k == 0:
                    # undo the encoder's first/second swap
                    triple, prevcoord = prevcoord, triple
                    out[write_at] = prevcoord
                    write_at += 1
                else:
                    prevcoord = list(triple)
                out[write_at] = triple
                write_at += 1
                i += 1
        else:
            out[write_at] = this
        if is_smaller < 0:
            smallnum = smaller
            smallidx += is_smaller
            smaller = MAGICINTS[smallidx - 1] // 2 if smallidx > FIRSTIDX else 0
        elif is_smaller > 0:
            smaller = smallnum
            smallidx += is_smaller
            smallnum = MAGICINTS[smallidx] // 2
        sizesmall = [MAGICINTS[smallidx]] * 3
        if sizesmall[0] == 0:
            raise ParseError("corrupt XTC small-size state", unit="byte")
    return out


def encode_frame(positions_ang: np.ndarray, step: int = 0, time: float = 0.0,
                 box_ang: np.ndarray | None = None, precision: float = 1000.0) -> bytes:
    """One XTC frame; positions in Angstrom, stored as nm."""
    pos_nm = np.asarray(positions_ang, dtype=np.float64) / ANG_PER_NM
    natoms = len(pos_nm)
    box_nm = (np.asarray(box_ang, dtype=np.float64) / ANG_PER_NM
              if box_ang is not None else np.zeros((3, 3)))
    head = struct.pack(">iiif", XTC_MAGIC, natoms, step, float(time))
    head += struct.pack(">9f", *box_nm.reshape(9))
    head += struct.pack(">i", natoms)
    if natoms <= 9:
        return head + struct.pack(f">{natoms * 3}f", *pos_nm.reshape(-1))

    lf = pos_nm.reshape(-1) * precision
    if np.abs(lf).max() > 2**31 - 2:
        raise ValueError("coordinates overflow XTC integer range at this precision")
    ints = np.where(lf >= 0, np.floor(lf + 0.5), np.ceil(lf - 0.5)).astype(np.int64)
    ints = ints.reshape(-1, 3)

    bw = _BitWriter()
    minint, maxint, smallidx = _compress_frame(ints, bw)
    payload = bw.getvalue()
    body = struct.pack(">f", precision)
    body += struct.pack(">3i", *minint) + struct.pack(">3i", *maxint)
    body += struct.pack(">i", smallidx)
    body += struct.pack(">i", len(payload))
    body += payload + b"\x00" * (-len(payload) % 4)
    return head + body


class XtcReader:
    """Iterates TrajectoryFrame objects; sets .truncated on a partial tail."""

    def __init__(self, data: bytes):
        self.data = data
        self.truncated = False
        self._pos = 0
        self.n_atoms = None

    def __iter__(self):
        from .molecule import TrajectoryFrame

        while self._pos < len(self.data):
            start = self._pos
            try:
                frame = self._read_frame()
            except (TruncatedFrame, struct.error):
                self.truncated = True
                self._pos = start
                return
            yield frame

    def _take(self, n: int) -> bytes:
        if self._pos + n > len(self.data):
            raise TruncatedFrame("unexpected end of XTC data")
        chunk = self.data[self._pos:self._pos + n]
        self._pos += n
        return chunk

    def _read_frame(self):
        from .molecule import TrajectoryFrame

        magic, natoms, step, time = struct.unpack(">iiif", self._take(16))
        if magic != XTC_MAGIC:
            raise ParseError(f"bad XTC magic {magic}", offset=self._pos - 16, unit="byte")
        box = np.array(struct.unpack(">9f", self._take(36))).reshape(3, 3)
        natoms2, = struct.unpack(">i", self._take(4))
        if natoms2 != natoms:
            raise ParseError("inconsistent XTC atom counts", offset=self._pos - 4, unit="byte")
        if self.n_atoms is None:
            self.n_atoms = natoms

        if natoms <= 9:
            floats = struct.unpack(f">{natoms * 3}f", self._take(natoms * 12))
            pos_nm = np.array(floats, dtype=np.float64).reshape(-1, 3)
        else:
            precision, = struct.unpack(">f", self._take(4))
            minint = list(struct.unpack(">3i", self._take(12)))
            maxint = list(struct.unpack(">3i", self._take(12)))
            smallidx, = struct.unpack(">i", self._take(4))
            if not FIRSTIDX <= smallidx < LASTIDX:
                raise ParseError(f"bad XTC small index {smallidx}", unit="byte")
            nbytes, = struct.unpack(">i", self._take(4))
            payload = self._take(nbytes)
            self._take(-nbytes % 4)
            ints = _decompress_frame(_BitReader(payload), natoms, minint, maxint, smallidx)
            pos_nm = ints.astype(np.float64) / precision

        box_ang = box * ANG_PER_NM if np.any(box) else None
        return TrajectoryFrame(pos_nm * ANG_PER_NM, box=box_ang, time=time)


def write_xtc(frames, precision: float = 1000.0) -> bytes:
    out = []
    for step, frame in enumerate(frames):
        out.append(encode_frame(
            frame.positions, step=step,
            time=frame.time if frame.time is not None else float(step),
            box_ang=frame.box, precision=precision,
        ))
    return b"".join(out)
