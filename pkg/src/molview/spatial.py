"""Uniform spatial hash grid over 3D points.

Cells are cubes of a fixed size chosen at build time (normally the largest
query cutoff). Neighbor enumeration only ever inspects the 27 surrounding
cells, so pair generation is expected linear in point count for bounded
density.
"""

from __future__ import annotations

import numpy as np

# the 13 lexicographically-positive neighbor offsets; together with the
# same-cell case they cover every adjacent cell pair exactly once
_HALF_OFFSETS = np.array(
    [
        (dx, dy, dz)
        for dx in (-1, 0, 1)
        for dy in (-1, 0, 1)
        for dz in (-1, 0, 1)
        if (dx, dy, dz) > (0, 0, 0)
    ],
    dtype=np.int64,
)

_ALL_OFFSETS = np.array(
    [(dx, dy, dz) for dx in (-1, 0, 1) for dy in (-1, 0, 1) for dz in (-1, 0, 1)],
    dtype=np.int64,
)


class SpatialHash:
    def __init__(self, points: np.ndarray, cell_size: float):
        if cell_size <= 0:
            raise ValueError("cell_size must be positive")
        pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        self.points = pts
        self.cell_size = float(cell_size)
        if len(pts) == 0:
            self._order = np.empty(0, dtype=np.int64)
            self._keys = np.empty(0, dtype=np.int64)
            self._uniq = np.empty(0, dtype=np.int64)
            self._starts = np.empty(0, dtype=np.int64)
            self._counts = np.empty(0, dtype=np.int64)
            self._mins = np.zeros(3, dtype=np.int64)
            self._dims = np.ones(3, dtype=np.int64)
            return
        cells = np.floor(pts / self.cell_size).astype(np.int64)
        # pad the index space by one cell so neighbor-key arithmetic never
        # wraps across rows at the boundary
        self._mins = cells.min(axis=0) - 1
        self._dims = cells.max(axis=0) - self._mins + 2
        rel = cells - self._mins
        keys = (rel[:, 0] * self._dims[1] + rel[:, 1]) * self._dims[2] + rel[:, 2]
        order = np.argsort(keys, kind="stable")
        self._order = order
        self._keys = keys[order]
        self._uniq, self._starts, self._counts = _group(self._keys)

    def __len__(self) -> int:
        return len(self.points)

    def pairs_within(self, cutoff: float) -> tuple[np.ndarray, np.ndarray]:
        """All unique index pairs (i < j) with |p_i - p_j| < cutoff.

        Requires cutoff <= cell_size.
        """
        if cutoff > self.cell_size + 1e-12:
            raise ValueError("cutoff exceeds grid cell size")
        n = len(self.points)
        if n < 2:
            e = np.empty(0, dtype=np.int64)
            return e, e
        chunks_i, chunks_j = [], []

        # same-cell candidates
        ci, cj = _cross_pairs(self._order, self._starts, self._counts,
                              self._starts, self._counts)
        keep = ci < cj
        chunks_i.append(ci[keep])
        chunks_j.append(cj[keep])

        # neighbor-cell candidates, each unordered cell pair visited once
        stride = np.array(
            [self._dims[1] * self._dims[2], self._dims[2], 1], dtype=np.int64
        )
        for off in _HALF_OFFSETS:
            dkey = int(off @ stride)
            target = self._uniq + dkey
            pos = np.searchsorted(self._uniq, target)
            pos_c = np.minimum(pos, len(self._uniq) - 1)
            hit = self._uniq[pos_c] == target
            if not hit.any():
                continue
            a_sel = np.flatnonzero(hit)
            b_sel = pos_c[hit]
            ci, cj = _cross_pairs(
                self._order, self._starts[a_sel], self._counts[a_sel],
                self._starts[b_sel], self._counts[b_sel],
            )
            chunks_i.append(ci)
            chunks_j.append(cj)

        i = np.concatenate(chunks_i)
        j = np.concatenate(chunks_j)
        d2 = np.einsum("ij,ij->i", self.points[i] - self.points[j],
                       self.points[i] - self.points[j])
        keep = d2 < cutoff * cutoff
        i, j = i[keep], j[keep]
        lo = np.minimum(i, j)
        hi = np.maximum(i, j)
        order = np.lexsort((hi, lo))
        return lo[order], hi[order]

    def near_mask(self, query: np.ndarray, radius: float) -> np.ndarray:
        """Boolean mask: query point within radius of any stored point.

        Requires radius <= cell_size.
        """
        if radius > self.cell_size + 1e-12:
            raise ValueError("radius exceeds grid cell size")
        q = np.asarray(query, dtype=np.float64).reshape(-1, 3)
        mask = np.zeros(len(q), dtype=bool)
        if len(q) == 0 or len(self.points) == 0:
            return mask
        cells = np.floor(q / self.cell_size).astype(np.int64) - self._mins
        stride = np.array(
            [self._dims[1] * self._dims[2], self._dims[2], 1], dtype=np.int64
        )
        # queries may fall outside the padded grid; their out-of-range keys
        # simply never match an occupied cell
        qkey = cells @ stride
        r2 = radius * radius
        for off in _ALL_OFFSETS:
            target = qkey + int(off @ stride)
            todo = np.flatnonzero(~mask)
            if len(todo) == 0:
                break
            pos = np.searchsorted(self._uniq, target[todo])
            pos_c = np.minimum(pos, len(self._uniq) - 1)
            hit = self._uniq[pos_c] == target[todo]
            if not hit.any():
                continue
            qi = todo[hit]
            starts = self._starts[pos_c[hit]]
            counts = self._counts[pos_c[hit]]
            prim = _ragged_members(self._order, starts, counts)
            qrep = np.repeat(qi, counts)
            d2 = np.einsum("ij,ij->i", q[qrep] - self.points[prim],
                           q[qrep] - self.points[prim])
            close = d2 < r2
            mask[qrep[close]] = True
        return mask


def _group(sorted_keys: np.ndarray):
    uniq, starts = np.unique(sorted_keys, return_index=True)
    counts = np.diff(np.append(starts, len(sorted_keys)))
    return uniq, starts.astype(np.int64), counts.astype(np.int64)


def _ragged_members(order, starts, counts):
    """Concatenate order[starts[k] : starts[k]+counts[k]] for all k."""
    total = int(counts.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    out_starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    pos = np.arange(total, dtype=np.int64) - np.repeat(out_starts, counts)
    return order[np.repeat(starts, counts) + pos]


def _cross_pairs(order, starts_a, counts_a, starts_b, counts_b):
    """Cartesian product of two ragged group lists, vectorized."""
    sizes = counts_a * counts_b
    total = int(sizes.sum())
    if total == 0:
        e = np.empty(0, dtype=np.int64)
        return e, e
    out_starts = np.concatenate(([0], np.cumsum(sizes)[:-1]))
    pos = np.arange(total, dtype=np.int64) - np.repeat(out_starts, sizes)
    nb = np.repeat(counts_b, sizes)
    a_local = pos // nb
    b_local = pos - a_local * nb
    i = order[np.repeat(starts_a, sizes) + a_local]
    j = order[np.repeat(starts_b, sizes) + b_local]
    return i, j
