"""Domain vocabulary: dominance relations, non-dominated sorting, and the
multi-attribute archive of expensively evaluated points.

Every point carries three mutable memory attributes (local search radius,
failure count, tabu count) alongside its immutable decision and objective
vectors. The archive is insertion-ordered and the ordinal is the canonical
identity: re-evaluated duplicates get fresh ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from mopls import kernels
from mopls.errors import DimensionError, EvaluationError


def dominates(a, b) -> bool:
    """True iff ``a`` Pareto-dominates ``b`` (minimization, strict)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionError(f"objective lengths differ: {a.shape} vs {b.shape}")
    return bool(np.all(a <= b) and np.any(a < b))


def _as_matrix(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return arr.reshape(0, 0)
    if arr.ndim != 2:
        raise DimensionError("expected a collection of equal-length vectors")
    return arr


def non_dominated_subset(points) -> np.ndarray:
    """Indices of the non-dominated vectors in ``points``.

    Duplicates of a non-dominated vector are all retained.
    """
    arr = _as_matrix(points)
    if arr.shape[0] == 0:
        return np.empty(0, dtype=int)
    return np.flatnonzero(kernels.nondominated_mask(arr))


def non_dominated_sort(points, stop_after: int | None = None) -> list[np.ndarray]:
    """Peel ``points`` into fronts of decreasing rank.

    Front 0 is the non-dominated subset; front t is the non-dominated subset
    once fronts 0..t-1 are removed. If ``stop_after`` is given, peeling stops
    as soon as that many indices have been covered (the remaining points are
    left unranked).
    """
    arr = _as_matrix(points)
    n = arr.shape[0]
    fronts: list[np.ndarray] = []
    remaining = np.arange(n)
    covered = 0
    while remaining.size:
        mask = kernels.nondominated_mask(arr[remaining])
        front = remaining[mask]
        fronts.append(front)
        covered += front.size
        remaining = remaining[~mask]
        if stop_after is not None and covered >= stop_after:
            break
    return fronts


@dataclass
class MemoryAttributes:
    """Mutable per-point search memory: (r_i, c_i, c'_i)."""

    radius: float
    failure_count: int = 0
    tabu_count: int = 0

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.failure_count < 0 or self.tabu_count < 0:
            raise ValueError("counts must be non-negative")


@dataclass
class EvaluatedPoint:
    """One archive record: decision, true objectives, memory, ordinal id."""

    decision: np.ndarray
    objectives: np.ndarray
    memory: MemoryAttributes
    id: int

    def __post_init__(self):
        self.decision = np.asarray(self.decision, dtype=float)
        self.objectives = np.asarray(self.objectives, dtype=float)
        if np.any(self.decision < -1e-12) or np.any(self.decision > 1 + 1e-12):
            raise ValueError("decision vector outside the unit hypercube")
        if not np.all(np.isfinite(self.objectives)):
            raise EvaluationError(
                f"non-finite objectives for archive point {self.id}: {self.objectives}"
            )


class EvaluationArchive:
    """Insertion-ordered archive S_m with tabu subset and Pareto subset.

    Only the master mutates the archive, between batches; workers read
    snapshots of the decision/objective matrices.
    """

    def __init__(self, d: int, k: int):
        self.d = d
        self.k = k
        self.points: list[EvaluatedPoint] = []
        self.tabu_ids: set[int] = set()
        self.pareto_ids: set[int] = set()
        self._X = np.empty((0, d))
        self._Y = np.empty((0, k))

    def __len__(self) -> int:
        return len(self.points)

    def add(self, decision, objectives, radius: float) -> EvaluatedPoint:
        """Admit one evaluated point with fresh memory attributes."""
        pt = EvaluatedPoint(
            decision=decision,
            objectives=objectives,
            memory=MemoryAttributes(radius=radius),
            id=len(self.points),
        )
        if pt.decision.shape != (self.d,) or pt.objectives.shape != (self.k,):
            raise DimensionError("point shape does not match archive dimensions")
        self.points.append(pt)
        self._X = np.vstack([self._X, pt.decision[None, :]])
        self._Y = np.vstack([self._Y, pt.objectives[None, :]])
        return pt

    def decisions(self) -> np.ndarray:
        """(m, d) matrix of all evaluated decision vectors (read-only view)."""
        view = self._X.view()
        view.flags.writeable = False
        return view

    def objectives(self) -> np.ndarray:
        """(m, k) matrix of all evaluated objective vectors (read-only view)."""
        view = self._Y.view()
        view.flags.writeable = False
        return view

    def recompute_pareto(self) -> set[int]:
        """Recompute pareto_ids from scratch over the whole archive."""
        mask = kernels.nondominated_mask(self._Y) if len(self.points) else np.empty(0, bool)
        self.pareto_ids = set(int(i) for i in np.flatnonzero(mask))
        return self.pareto_ids

    def pareto_objectives(self) -> np.ndarray:
        ids = sorted(self.pareto_ids)
        return self._Y[ids] if ids else np.empty((0, self.k))

    def set_tabu(self, pid: int, tenure: int) -> None:
        self.points[pid].memory.tabu_count = tenure
        self.tabu_ids.add(pid)

    def clear_tabu(self, pid: int) -> None:
        self.points[pid].memory.tabu_count = 0
        self.tabu_ids.discard(pid)

    def check_invariants(self) -> None:
        """Raise AssertionError if archive bookkeeping is inconsistent."""
        ids = {p.id for p in self.points}
        assert self.tabu_ids <= ids and self.pareto_ids <= ids
        for p in self.points:
            assert (p.id in self.tabu_ids) == (p.memory.tabu_count > 0)
        mask = kernels.nondominated_mask(self._Y) if self.points else np.empty(0, bool)
        assert self.pareto_ids == set(int(i) for i in np.flatnonzero(mask))
