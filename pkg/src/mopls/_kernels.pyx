# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: non-dominated filtering and 2-D hypervolume sweeps.

Semantics are identical to the pure-numpy fallback in ``_kernels_py``;
see that module for documentation. Minimization in every objective.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def nondominated_mask(Y):
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] arr = \
        np.ascontiguousarray(Y, dtype=np.float64)
    cdef Py_ssize_t n = arr.shape[0]
    cdef Py_ssize_t k = arr.shape[1]
    mask_np = np.zeros(n, dtype=np.uint8)
    if n == 0:
        return mask_np.astype(bool)
    order_np = np.lexsort(arr.T[::-1]).astype(np.intp)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] mask = mask_np
    cdef cnp.ndarray[cnp.intp_t, ndim=1] order = order_np
    surv_np = np.empty((n, k), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] surv = surv_np
    cdef Py_ssize_t ns = 0, oi, idx, s, j
    cdef bint dominated, all_le, any_lt
    for oi in range(n):
        idx = order[oi]
        dominated = False
        for s in range(ns):
            all_le = True
            any_lt = False
            for j in range(k):
                if surv[s, j] > arr[idx, j]:
                    all_le = False
                    break
                if surv[s, j] < arr[idx, j]:
                    any_lt = True
            if all_le and any_lt:
                dominated = True
                break
        if not dominated:
            mask[idx] = 1
            for j in range(k):
                surv[ns, j] = arr[idx, j]
            ns += 1
    return mask_np.astype(bool)


def hv2d(Y, ref):
    Y = np.asarray(Y, dtype=np.float64)
    if Y.size == 0:
        return 0.0
    ref = np.asarray(ref, dtype=np.float64)
    P = Y[np.all(Y < ref, axis=1)]
    if len(P) == 0:
        return 0.0
    P = np.ascontiguousarray(P[np.lexsort((P[:, 1], P[:, 0]))])
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] pts = P
    cdef double r0 = ref[0], r1 = ref[1]
    cdef double hv = 0.0, prev_y = r1
    cdef Py_ssize_t i, n = pts.shape[0]
    for i in range(n):
        if pts[i, 1] < prev_y:
            hv += (r0 - pts[i, 0]) * (prev_y - pts[i, 1])
            prev_y = pts[i, 1]
    return hv


def hv2d_improvements(front, ref, cands):
    from mopls._kernels_py import _clean_front_2d

    ref = np.asarray(ref, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] C = \
        np.ascontiguousarray(cands, dtype=np.float64)
    fx_np, fy_np = _clean_front_2d(front, ref)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fx = np.ascontiguousarray(fx_np)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fy = np.ascontiguousarray(fy_np)
    cdef Py_ssize_t m = fx.shape[0]
    cdef Py_ssize_t nc = C.shape[0]
    out_np = np.zeros(nc, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = out_np
    cdef double r0 = ref[0], r1 = ref[1]
    cdef double c0, c1, yb, x, area, a0, a1
    cdef Py_ssize_t ci, i, j, lo, hi, mid
    cdef bint closed
    for ci in range(nc):
        c0 = C[ci, 0]
        c1 = C[ci, 1]
        if not (c0 < r0 and c1 < r1):
            continue
        # j = first front index with fx > c0 (binary search, side="right")
        lo = 0
        hi = m
        while lo < hi:
            mid = (lo + hi) // 2
            if fx[mid] <= c0:
                lo = mid + 1
            else:
                hi = mid
        j = lo
        if j > 0 and fy[j - 1] <= c1:
            continue
        yb = fy[j - 1] if j > 0 else r1
        x = c0
        area = 0.0
        closed = False
        for i in range(j, m):
            a0 = fx[i]
            a1 = fy[i]
            if a0 >= r0:
                break
            if a1 >= yb:
                continue
            area += (a0 - x) * (yb - c1)
            x = a0
            if a1 <= c1:
                closed = True
                break
            yb = a1
        if not closed:
            area += (r0 - x) * (yb - c1)
        out[ci] = area
    return out_np
