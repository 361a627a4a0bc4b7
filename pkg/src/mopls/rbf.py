"""Cubic radial-basis-function interpolation with a linear polynomial tail.

One surrogate per objective, fitted on a shared local training set (the
archive points nearest the search center). The interpolation system is

    [ Phi  P ] [ w ]   [ v ]
    [ P^T  0 ] [ c ] = [ 0 ]

with Phi_ij = ||x_i - x_j||^3 and P = [1 | X]. Ill-conditioned systems are
retried with escalating ridge regularization on the diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from mopls.errors import DimensionError

_RIDGE_START = 1e-8
_RIDGE_MAX = 1e-2


@dataclass
class RbfSurrogate:
    """Fitted cubic RBF interpolant for a single objective."""

    centers: np.ndarray  # (n, d)
    weights: np.ndarray  # (n,)
    tail: np.ndarray  # (d + 1,): constant then linear coefficients

    def predict(self, x) -> float:
        return float(self.predict_batch(np.asarray(x, dtype=float)[None, :])[0])

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.centers.shape[1]:
            raise DimensionError(
                f"expected dimension {self.centers.shape[1]}, got {X.shape[1]}"
            )
        phi = cdist(X, self.centers, metric="sqeuclidean") ** 1.5
        return phi @ self.weights + self.tail[0] + X @ self.tail[1:]


def _solve_system(A: np.ndarray, B: np.ndarray, n: int) -> np.ndarray:
    """Solve the augmented system, escalating ridge regularization on failure.

    Residuals are judged on the interpolation rows only (the first n).
    """
    import warnings

    from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

    best = None
    best_res = np.inf
    scale = 1.0 + np.abs(B[:n]).max(initial=0.0)
    ridge = 0.0
    while True:
        try:
            M = A if ridge == 0.0 else A + ridge * np.eye(len(A))
            with warnings.catch_warnings():
                # Near-singular systems are expected here; the residual
                # check and ridge escalation below deal with them.
                warnings.simplefilter("ignore", LinAlgWarning)
                lu = lu_factor(M)
            sol = lu_solve(lu, B)
            res = np.abs((A @ sol - B)[:n]).max(initial=0.0)
            # Iterative refinement against the original matrix recovers
            # interpolation accuracy on ill-conditioned kernel blocks.
            for _ in range(20):
                if not np.isfinite(res) or res <= 1e-12 * scale:
                    break
                better = sol + lu_solve(lu, B - A @ sol)
                better_res = np.abs((A @ better - B)[:n]).max(initial=0.0)
                if not np.isfinite(better_res) or better_res >= res:
                    break
                sol, res = better, better_res
            if np.isfinite(res) and res < best_res:
                best, best_res = sol, res
            if res <= 1e-10 * scale:
                return sol
        except (np.linalg.LinAlgError, ValueError):
            pass
        ridge = _RIDGE_START if ridge == 0.0 else ridge * 10.0
        if ridge > _RIDGE_MAX:
            break
    if best is None:
        raise np.linalg.LinAlgError("RBF system unsolvable even with ridge")
    return best


def fit_objectives(X, V) -> list[RbfSurrogate]:
    """Fit one cubic RBF surrogate per column of ``V`` on shared inputs ``X``.

    Exact duplicate rows of ``X`` are collapsed (first occurrence kept)
    before solving, to keep the kernel block nonsingular.
    """
    X = np.asarray(X, dtype=float)
    V = np.asarray(V, dtype=float)
    if X.ndim != 2 or len(X) == 0:
        raise ValueError("training set must be a non-empty (n, d) matrix")
    if V.ndim == 1:
        V = V[:, None]
    _, keep = np.unique(X, axis=0, return_index=True)
    keep = np.sort(keep)
    X, V = X[keep], V[keep]
    n, d = X.shape
    phi = cdist(X, X, metric="sqeuclidean") ** 1.5
    P = np.hstack([np.ones((n, 1)), X])
    A = np.zeros((n + d + 1, n + d + 1))
    A[:n, :n] = phi
    A[:n, n:] = P
    A[n:, :n] = P.T
    B = np.zeros((n + d + 1, V.shape[1]))
    B[:n] = V
    sol = _solve_system(A, B, n)
    return [
        RbfSurrogate(centers=X, weights=sol[:n, j], tail=sol[n:, j])
        for j in range(V.shape[1])
    ]


def fit(training) -> RbfSurrogate:
    """Fit a single surrogate from ``[(x, value), ...]`` pairs."""
    if not len(training):
        raise ValueError("empty training set")
    X = np.asarray([np.asarray(x, dtype=float) for x, _ in training])
    v = np.asarray([val for _, val in training], dtype=float)
    return fit_objectives(X, v)[0]


def select_training_set(center, X: np.ndarray, cap: int = 500) -> np.ndarray:
    """Indices of the ``cap`` rows of ``X`` nearest ``center``.

    Ties at the cap boundary are broken toward the lower archive ordinal
    (stable sort on distances).
    """
    center = np.asarray(center, dtype=float)
    dist = np.linalg.norm(X - center[None, :], axis=1)
    order = np.argsort(dist, kind="stable")
    return np.sort(order[: min(cap, len(X))])


def fit_all_objectives(center, X: np.ndarray, Y: np.ndarray, cap: int = 500):
    """Fit k independent surrogates on the shared local training subset."""
    idx = select_training_set(center, X, cap)
    return fit_objectives(X[idx], Y[idx])
