import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def brute_force_nondominated(Y: np.ndarray) -> np.ndarray:
    """O(n^2 k) pairwise dominance oracle: indices of non-dominated rows."""
    n = len(Y)
    keep = []
    for i in range(n):
        dominated = False
        for j in range(n):
            if i == j:
                continue
            if np.all(Y[j] <= Y[i]) and np.any(Y[j] < Y[i]):
                dominated = True
                break
        if not dominated:
            keep.append(i)
    return np.array(keep, dtype=int)


def brute_force_fronts(Y: np.ndarray) -> list:
    """Iterated brute-force peeling into fronts (index arrays)."""
    remaining = np.arange(len(Y))
    fronts = []
    while remaining.size:
        nd = brute_force_nondominated(Y[remaining])
        fronts.append(remaining[nd])
        remaining = np.delete(remaining, nd)
    return fronts


def inclusion_exclusion_hv(points: np.ndarray, ref: np.ndarray) -> float:
    """Exact union volume of the boxes [y, ref] by inclusion-exclusion.

    Exponential in the number of points; only for tiny fixtures.
    """
    from itertools import combinations

    pts = [p for p in np.asarray(points, float) if np.all(p < ref)]
    total = 0.0
    for r in range(1, len(pts) + 1):
        for combo in combinations(pts, r):
            corner = np.max(combo, axis=0)
            vol = float(np.prod(np.maximum(ref - corner, 0.0)))
            total += ((-1) ** (r + 1)) * vol
    return total
