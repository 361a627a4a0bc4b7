"""Pure-numpy implementations of the performance-critical kernels.

These mirror the compiled extension in ``_kernels.pyx`` exactly; the public
entry point is :mod:`mopls.kernels`, which picks whichever backend is
available. All functions assume minimization in every objective.
"""

import numpy as np

BACKEND = "python"


def nondominated_mask(Y: np.ndarray) -> np.ndarray:
    """Boolean mask of the non-dominated rows of ``Y`` (n, k).

    Duplicates of a non-dominated vector are all retained: dominance is
    strict, so equal vectors never eliminate each other.
    """
    Y = np.ascontiguousarray(Y, dtype=np.float64)
    n, k = Y.shape
    mask = np.zeros(n, dtype=bool)
    if n == 0:
        return mask
    # Sort by f1, then f2, ... so that no later point can strictly dominate
    # an earlier one; each point then only needs checking against the
    # survivors found so far (dominance is transitive).
    order = np.lexsort(Y.T[::-1])
    surv = np.empty((n, k))
    ns = 0
    for idx in order:
        y = Y[idx]
        if ns:
            S = surv[:ns]
            dominated = bool(np.any(np.all(S <= y, axis=1) & np.any(S < y, axis=1)))
        else:
            dominated = False
        if not dominated:
            mask[idx] = True
            surv[ns] = y
            ns += 1
    return mask


def hv2d(Y: np.ndarray, ref: np.ndarray) -> float:
    """Exact 2-D hypervolume of ``Y`` against ``ref`` (sorted sweep).

    Points not strictly below ``ref`` in both coordinates contribute nothing
    and are discarded; dominated points are handled by the sweep.
    """
    Y = np.asarray(Y, dtype=np.float64)
    if Y.size == 0:
        return 0.0
    ref = np.asarray(ref, dtype=np.float64)
    P = Y[np.all(Y < ref, axis=1)]
    if len(P) == 0:
        return 0.0
    P = P[np.lexsort((P[:, 1], P[:, 0]))]
    hv = 0.0
    prev_y = ref[1]
    for x, y in P:
        if y < prev_y:
            hv += (ref[0] - x) * (prev_y - y)
            prev_y = y
    return float(hv)


def _clean_front_2d(front: np.ndarray, ref: np.ndarray):
    """Reduce to the non-dominated, strictly-below-ref subset, sorted by f1."""
    front = np.asarray(front, dtype=np.float64)
    if front.size == 0:
        return np.empty(0), np.empty(0)
    front = front[np.all(front < ref, axis=1)]
    if len(front) == 0:
        return np.empty(0), np.empty(0)
    front = front[nondominated_mask(front)]
    # Drop exact duplicates; they do not change the dominated region.
    front = np.unique(front, axis=0)
    order = np.argsort(front[:, 0], kind="stable")
    return np.ascontiguousarray(front[order, 0]), np.ascontiguousarray(front[order, 1])


def hv2d_improvements(
    front: np.ndarray, ref: np.ndarray, cands: np.ndarray
) -> np.ndarray:
    """Exact hypervolume improvement of each candidate over ``front``.

    ``improvements[i] = hv2d(front + cands[i]) - hv2d(front)``, computed as
    the area of the candidate's exclusive region. Candidates weakly
    dominated by the front (or not strictly below ``ref``) get 0.
    """
    ref = np.asarray(ref, dtype=np.float64)
    cands = np.asarray(cands, dtype=np.float64)
    fx, fy = _clean_front_2d(front, ref)
    m = len(fx)
    out = np.zeros(len(cands))
    r0, r1 = float(ref[0]), float(ref[1])
    for ci in range(len(cands)):
        c0, c1 = cands[ci]
        if not (c0 < r0 and c1 < r1):
            continue
        j = int(np.searchsorted(fx, c0, side="right"))
        if j > 0 and fy[j - 1] <= c1:
            continue  # weakly dominated by a front point
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
    return out
