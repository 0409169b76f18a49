"""Pure-Python/numpy implementations of the hot kernels.

These mirror ``_ckernels.pyx`` signature for signature and are used when the
compiled extension is unavailable (or ``RELLOC_PURE=1`` is set).

All arrays are 1-indexed: slot 0 is a sentinel vertex that is never a member
of a candidate mask and pads the closed-neighbourhood table.
"""

from __future__ import annotations

from collections import deque

import numpy as np

UNREACHED = -1


def bfs_distances(indptr: np.ndarray, indices: np.ndarray, source: int) -> np.ndarray:
    n1 = indptr.shape[0] - 1
    dist = np.full(n1, UNREACHED, dtype=np.int32)
    ptr = indptr.tolist()
    nbrs = indices.tolist()
    dist_l = dist.tolist()
    dist_l[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist_l[u] + 1
        for k in range(ptr[u], ptr[u + 1]):
            w = nbrs[k]
            if dist_l[w] == UNREACHED:
                dist_l[w] = du
                queue.append(w)
    return np.asarray(dist_l, dtype=np.int32)


def update_candidates(
    closed_nbrs: np.ndarray,
    mask_prev: np.ndarray,
    dist_prev: np.ndarray,
    dist_cur: np.ndarray,
    bit: int,
    may_move: bool,
) -> np.ndarray:
    """One forward step of the knowledge-set recursion.

    ``v`` survives iff some ``u`` in ``N[v]`` (or ``u == v`` when the mouse is
    frozen) was a candidate and ``(dist_cur[v] <= dist_prev[u]) == bit``.
    """
    if not may_move:
        out = mask_prev & ((dist_cur <= dist_prev) == bool(bit))
    else:
        valid = mask_prev[closed_nbrs]
        vals = dist_prev[closed_nbrs]
        if bit:
            best = np.where(valid, vals, -1).max(axis=1)
            out = best >= dist_cur
        else:
            big = np.iinfo(np.int32).max
            best = np.where(valid, vals, big).min(axis=1)
            out = best < dist_cur
    out = np.ascontiguousarray(out, dtype=np.bool_)
    out[0] = False
    return out


def masked_eccentricity(tables: list[np.ndarray]) -> np.ndarray:
    """Pointwise maximum over a list of distance tables."""
    ecc = tables[0].copy()
    for t in tables[1:]:
        np.maximum(ecc, t, out=ecc)
    return ecc
