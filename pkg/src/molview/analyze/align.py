"""Optimal superposition (Kabsch) and CE structural alignment.

CE here follows the combinatorial-extension scheme: candidate aligned
fragment pairs (AFPs) of fixed length are scored on intra-molecular C-alpha
distance-matrix agreement, then chained into the longest monotone path with
bounded gaps. The winning path's residue pairs feed the Kabsch superposition
for the reported rotation and rmsd. No z-score statistics and no final
dynamic-programming refinement are applied.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateInput, NoAlignment

FRAGMENT = 8            # AFP length m
AFP_THRESHOLD = 3.0     # D0: admission cutoff on fragment discrepancy (A)
PATH_THRESHOLD = 4.0    # D1: running-average cutoff along a path (A)
MAX_GAP = 30            # residues of gap allowed between chained AFPs
_MAX_AFPS = 20_000      # densest grids keep only the best-scoring AFPs


@dataclass
class Alignment:
    pairs: list            # [(residue index in A, residue index in B)]
    rotation: np.ndarray   # (3, 3), det +1
    translation: np.ndarray
    rmsd: float
    coverage: float

    def __post_init__(self):
        r = self.rotation
        if np.abs(r @ r.T - np.eye(3)).max() > 1e-9 or np.linalg.det(r) < 0:
            raise ValueError("rotation is not a proper orthonormal matrix")
        if self.rmsd < 0:
            raise ValueError("negative rmsd")
        for (a0, b0), (a1, b1) in zip(self.pairs, self.pairs[1:]):
            if a1 <= a0 or b1 <= b0:
                raise ValueError("aligned pairs must increase in both chains")


def kabsch(P, Q):
    """Least-squares rigid motion mapping P onto Q.

    Returns (rotation, translation, rmsd) with rmsd the global minimum over
    rigid motions; reflections are excluded by flipping the axis of the
    smallest singular value when needed.
    """
    P = np.asarray(P, dtype=np.float64).reshape(-1, 3)
    Q = np.asarray(Q, dtype=np.float64).reshape(-1, 3)
    if len(P) != len(Q) or len(P) < 3:
        raise DegenerateInput("need two equal point sets of at least 3 points")
    cp = P.mean(axis=0)
    cq = Q.mean(axis=0)
    X = P - cp
    Y = Q - cq
    H = X.T @ Y
    U, S, Vt = np.linalg.svd(H)
    span = np.linalg.svd(X, compute_uv=False)
    if span[0] < 1e-9 or span[1] < 1e-9 * max(span[0], 1.0):
        raise DegenerateInput("points are coincident or collinear")
    d = np.sign(np.linalg.det(Vt.T @ U.T))
    if d == 0:
        d = 1.0
    flip = np.diag([1.0, 1.0, d])
    R = Vt.T @ flip @ U.T
    t = cq - R @ cp
    moved = P @ R.T + t
    rmsd = float(np.sqrt(np.mean(np.sum((moved - Q) ** 2, axis=1))))
    return R, t, rmsd


def transform_points(R, t, P):
    return np.asarray(P, dtype=np.float64) @ np.asarray(R).T + np.asarray(t)


def ce_align(molA, molB, chain_a: int = 0, chain_b: int = 0) -> Alignment:
    """Align one chain of molA to one chain of molB by combinatorial extension."""
    res_a, ca_a = _calpha_trace(molA, chain_a)
    res_b, ca_b = _calpha_trace(molB, chain_b)
    if len(ca_a) < FRAGMENT or len(ca_b) < FRAGMENT:
        raise NoAlignment("chains need at least 8 residues with C-alpha atoms")

    disc = _afp_grid(ca_a, ca_b)
    admissible = disc <= AFP_THRESHOLD
    if not admissible.any():
        raise NoAlignment(f"no fragment pair within {AFP_THRESHOLD} A discrepancy")
    ii, jj = np.nonzero(admissible)
    scores = disc[ii, jj]
    if len(ii) > _MAX_AFPS:
        keep = np.argsort(scores, kind="stable")[:_MAX_AFPS]
        keep.sort()
        ii, jj, scores = ii[keep], jj[keep], scores[keep]

    path = _best_path(ii, jj, scores, ca_a, ca_b)
    pairs = []
    for i, j in path:
        pairs.extend((res_a[i + k], res_b[j + k]) for k in range(FRAGMENT))

    pa = np.array([ca_a[i + k] for i, _ in path for k in range(FRAGMENT)])
    pb = np.array([ca_b[j + k] for _, j in path for k in range(FRAGMENT)])
    R, t, rmsd = kabsch(pa, pb)
    coverage = len(pairs) / min(len(ca_a), len(ca_b))
    return Alignment(pairs=pairs, rotation=R, translation=t,
                     rmsd=rmsd, coverage=coverage)


def _calpha_trace(mol, chain_index: int):
    chains = mol.chains()
    if chain_index >= len(chains):
        raise NoAlignment(f"molecule has no chain index {chain_index}")
    res, coords = [], []
    for r in chains[chain_index].residue_indices:
        ca = mol.residue_atom_name_index(r, "CA")
        if ca is not None:
            res.append(r)
            coords.append(mol.coords[ca])
    return res, np.asarray(coords, dtype=np.float64)


def _afp_grid(ca_a: np.ndarray, ca_b: np.ndarray) -> np.ndarray:
    """Intra-fragment discrepancy for every fragment pair (i, j).

    Follows the original combinatorial-extension measure: the distances
    compared are the fragment's cross pairs (residue k against residue
    m-1-k), which span the window and discriminate shape far better than
    the short-range entries of the full distance matrix.
    """
    m = FRAGMENT
    da = np.linalg.norm(ca_a[:, None, :] - ca_a[None, :, :], axis=2)
    db = np.linalg.norm(ca_b[:, None, :] - ca_b[None, :, :], axis=2)
    na = len(ca_a) - m + 1
    nb = len(ca_b) - m + 1
    out = np.zeros((na, nb))
    ia = np.arange(na)
    ib = np.arange(nb)
    for k in range(m):
        va = da[ia + k, ia + (m - 1) - k]
        vb = db[ib + k, ib + (m - 1) - k]
        out += np.abs(va[:, None] - vb[None, :])
    return out / m


def _best_path(ii, jj, scores, ca_a, ca_b):
    """Longest admissible AFP chain; ties by total discrepancy then position.

    Extending a path with a new AFP requires the average inter-fragment
    discrepancy between the new AFP and every AFP already on the path to
    stay within D1; that term anchors global consistency (fragments that
    merely look alike internally cannot chain unless their relative geometry
    agrees in both structures).
    """
    m = FRAGMENT
    order = np.lexsort((jj, ii))
    ii, jj, scores = ii[order], jj[order], scores[order]

    da = np.linalg.norm(ca_a[:, None, :] - ca_a[None, :, :], axis=2)
    db = np.linalg.norm(ca_b[:, None, :] - ca_b[None, :, :], axis=2)
    ar = np.arange(m)

    # rounding makes tie-breaks invariant to the ~1e-14 noise a rigid motion
    # introduces into recomputed distances
    scores = np.round(scores, 6)

    n = len(ii)
    keys = ii * (jj.max() + 2) + jj          # lexicographic composite key
    best_count = np.ones(n, dtype=np.int64)
    best_total = scores.copy()               # accumulated terms, tie-breaking
    best_terms = np.ones(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)

    jspan = jj.max() + 2
    for k in range(n):
        i, j = int(ii[k]), int(jj[k])
        if i < m or j < m:
            continue
        cands = []
        j_lo = max(0, j - m - MAX_GAP)
        j_hi = j - m
        for pi in range(max(0, i - m - MAX_GAP), i - m + 1):
            lo = np.searchsorted(keys, pi * jspan + j_lo)
            hi = np.searchsorted(keys, pi * jspan + j_hi + 1)
            if hi > lo:
                cands.append(np.arange(lo, hi))
        if not cands:
            continue
        cand = np.concatenate(cands)

        # walk the full ancestor chain of every candidate
        inter_sum = np.zeros(len(cand))
        inter_cnt = np.zeros(len(cand))
        anc = cand.copy()
        alive = anc >= 0
        while alive.any():
            sel = np.flatnonzero(alive)
            a = anc[sel]
            term = np.abs(
                da[np.add.outer(ii[a], ar), i + ar]
                - db[np.add.outer(jj[a], ar), j + ar]
            ).mean(axis=1)
            inter_sum[sel] += np.round(term, 6)
            inter_cnt[sel] += 1
            anc[sel] = parent[a]
            alive = anc >= 0

        # both the new AFP's own consistency and the pooled running average
        # over every accumulated term must stay within D1
        tot = np.round(best_total[cand] + scores[k] + inter_sum, 6)
        terms = best_terms[cand] + 1 + inter_cnt.astype(np.int64)
        ok = (inter_sum / np.maximum(inter_cnt, 1) <= PATH_THRESHOLD)
        ok &= tot / terms <= PATH_THRESHOLD
        if not ok.any():
            continue
        cand, tot, terms = cand[ok], tot[ok], terms[ok]
        cnt = best_count[cand] + 1
        # best transition: max count, min total, earliest predecessor
        pick = np.lexsort((cand, tot, -cnt))[0]
        if (cnt[pick] > best_count[k]
                or (cnt[pick] == best_count[k] and tot[pick] < best_total[k])):
            best_count[k] = cnt[pick]
            best_total[k] = tot[pick]
            best_terms[k] = terms[pick]
            parent[k] = cand[pick]

    best = max(
        range(n),
        key=lambda k: (best_count[k], -best_total[k], -ii[k], -jj[k]),
    )
    path = []
    k = best
    while k >= 0:
        path.append((int(ii[k]), int(jj[k])))
        k = int(parent[k])
    path.reverse()
    return path
