"""Hypervolume computation: exact (k = 2, 3), Monte Carlo (any k),
per-point contributions, and hypervolume improvement.

All routines take minimization objectives and a reference vector that the
measured set should strictly dominate; vectors violating that contribute
zero and are discarded before measuring.
"""

from __future__ import annotations

import numpy as np

from mopls import kernels
from mopls.errors import DominatedMemberError, UnsupportedDimensionError


def _front_array(front) -> np.ndarray:
    arr = np.asarray(front, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 0)
    return arr


def _hv3d(Y: np.ndarray, ref: np.ndarray) -> float:
    """Exact 3-D hypervolume via dimension sweep over f3 slices."""
    P = Y[np.all(Y < ref, axis=1)]
    if len(P) == 0:
        return 0.0
    zs = np.unique(P[:, 2])
    vol = 0.0
    for i, z in enumerate(zs):
        z_next = zs[i + 1] if i + 1 < len(zs) else ref[2]
        slab = P[P[:, 2] <= z][:, :2]
        vol += (z_next - z) * kernels.hv2d(slab, ref[:2])
    return float(vol)


def hv_exact(front, ref) -> float:
    """Exact hypervolume of ``front`` bounded by ``ref`` (k in {2, 3})."""
    Y = _front_array(front)
    if Y.shape[0] == 0:
        return 0.0
    ref = np.asarray(ref, dtype=float)
    k = Y.shape[1]
    if k == 2:
        return float(kernels.hv2d(Y, ref))
    if k == 3:
        return _hv3d(Y, ref)
    raise UnsupportedDimensionError(f"exact hypervolume supports k <= 3, got k={k}")


def hv_monte_carlo(front, ref, n_samples: int, rng: np.random.Generator) -> float:
    """Monte Carlo hypervolume estimate (any k).

    Samples uniformly in the box spanned by the componentwise minimum of the
    front and ``ref``; the dominated region is contained in that box.
    """
    Y = _front_array(front)
    ref = np.asarray(ref, dtype=float)
    if Y.shape[0] == 0:
        return 0.0
    Y = Y[np.all(Y < ref, axis=1)]
    if len(Y) == 0:
        return 0.0
    lo = Y.min(axis=0)
    vol_box = float(np.prod(ref - lo))
    if vol_box == 0.0:
        return 0.0
    samples = rng.uniform(lo, ref, size=(n_samples, len(ref)))
    dominated = np.zeros(n_samples, dtype=bool)
    for y in Y:
        dominated |= np.all(samples >= y, axis=1)
    return vol_box * float(dominated.mean())


def hv_contributions(front, ref) -> np.ndarray:
    """Leave-one-out hypervolume contribution of each front member.

    The front must be mutually non-dominated; duplicated vectors get a
    contribution of exactly 0.
    """
    Y = _front_array(front)
    n = Y.shape[0]
    if n == 0:
        return np.empty(0)
    ref = np.asarray(ref, dtype=float)
    mask = kernels.nondominated_mask(Y)
    if not mask.all():
        bad = np.flatnonzero(~mask)
        raise DominatedMemberError(f"front members {bad.tolist()} are dominated")
    total = hv_exact(Y, ref)
    hc = np.empty(n)
    for i in range(n):
        rest = np.delete(Y, i, axis=0)
        hc[i] = total - hv_exact(rest, ref)
    # Leave-one-out differences are >= 0 up to floating point noise.
    return np.maximum(hc, 0.0)


def hv_improvement(
    front,
    candidate,
    ref,
    mc_samples: int | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Hypervolume gained by adding ``candidate`` to ``front``.

    Exact for k <= 3 when ``mc_samples`` is None; otherwise a Monte Carlo
    estimate over the candidate's exclusive box (works for any k). Returns
    0 for candidates weakly dominated by the front or not strictly below
    ``ref``.
    """
    Y = _front_array(front)
    c = np.asarray(candidate, dtype=float)
    ref = np.asarray(ref, dtype=float)
    if not np.all(c < ref):
        return 0.0
    if Y.shape[0] and np.any(np.all(Y <= c, axis=1)):
        return 0.0  # weakly dominated (equal front member included)
    k = len(c)
    if mc_samples is None:
        if k == 2:
            return float(kernels.hv2d_improvements(Y, ref, c[None, :])[0])
        if k == 3:
            base = Y if Y.shape[0] else np.empty((0, 3))
            return max(hv_exact(np.vstack([base, c[None, :]]), ref) - hv_exact(base, ref), 0.0)
        raise UnsupportedDimensionError(
            f"exact improvement supports k <= 3, got k={k}; pass mc_samples"
        )
    if rng is None:
        raise ValueError("Monte Carlo improvement needs an rng")
    samples = rng.uniform(c, ref, size=(mc_samples, k))
    exclusive = np.ones(mc_samples, dtype=bool)
    for y in Y:
        exclusive &= ~np.all(samples >= y, axis=1)
    return float(np.prod(ref - c)) * float(exclusive.mean())


def hv_improvements_batch(front, candidates, ref) -> np.ndarray:
    """Exact improvement of every candidate row (k in {2, 3})."""
    Y = _front_array(front)
    C = np.asarray(candidates, dtype=float)
    ref = np.asarray(ref, dtype=float)
    k = C.shape[1]
    if k == 2:
        return kernels.hv2d_improvements(Y, ref, C)
    if k == 3:
        return np.array([hv_improvement(Y, c, ref) for c in C])
    raise UnsupportedDimensionError(f"exact batch improvement supports k <= 3, got k={k}")


def running_reference(objectives, margin: float = 0.1) -> np.ndarray:
    """Internal reference vector: componentwise worst plus a margin.

    The margin is a fraction of the observed per-objective span, with a
    small floor so degenerate (constant) objectives still sit strictly
    below the reference.
    """
    Y = np.asarray(objectives, dtype=float)
    worst = Y.max(axis=0)
    span = worst - Y.min(axis=0)
    pad = margin * np.maximum(span, 1e-6 * np.maximum(np.abs(worst), 1.0))
    return worst + pad
