# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: BFS tables and the candidate-set DP step."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

UNREACHED = -1


def bfs_distances(const cnp.int32_t[::1] indptr, const cnp.int32_t[::1] indices, int source):
    cdef Py_ssize_t n1 = indptr.shape[0] - 1
    out = np.full(n1, -1, dtype=np.int32)
    cdef cnp.int32_t[::1] dist = out
    queue_arr = np.empty(n1, dtype=np.int32)
    cdef cnp.int32_t[::1] queue = queue_arr
    cdef Py_ssize_t head = 0, tail = 0, k
    cdef int u, w, du
    dist[source] = 0
    queue[tail] = source
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if dist[w] == -1:
                dist[w] = du
                queue[tail] = w
                tail += 1
    return out


def update_candidates(const cnp.int32_t[:, ::1] closed_nbrs,
                      mask_prev,
                      const cnp.int32_t[::1] dist_prev,
                      const cnp.int32_t[::1] dist_cur,
                      int bit,
                      bint may_move):
    if not may_move:
        # a frozen step is a pointwise test; numpy's vector loop beats ours
        out = np.ascontiguousarray(
            mask_prev & ((np.asarray(dist_cur) <= np.asarray(dist_prev)) == (bit != 0)),
            dtype=np.bool_,
        )
        out[0] = False
        return out
    cdef const cnp.uint8_t[::1] prev = np.ascontiguousarray(mask_prev).view(np.uint8)
    cdef Py_ssize_t n1 = closed_nbrs.shape[0]
    cdef Py_ssize_t width = closed_nbrs.shape[1]
    out = np.zeros(n1, dtype=np.bool_)
    cdef cnp.uint8_t[::1] cur = out.view(np.uint8)
    cdef Py_ssize_t v, k
    cdef int u, dv
    for v in range(1, n1):
        dv = dist_cur[v]
        for k in range(width):
            u = closed_nbrs[v, k]
            if u == 0:
                break
            if prev[u] and ((dv <= dist_prev[u]) == (bit != 0)):
                cur[v] = 1
                break
    return out


def masked_eccentricity(tables):
    # pointwise max is memory bound; numpy's SIMD reduction is already optimal
    out = np.array(tables[0], dtype=np.int32, copy=True)
    for t in tables[1:]:
        np.maximum(out, t, out=out)
    return out
