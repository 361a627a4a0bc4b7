"""Synchronous batch evaluation with master-worker semantics.

A batch of points is evaluated on a bounded worker pool; results always
come back in submission order, so the executor introduces no
nondeterminism regardless of pool size. In simulated mode one batch costs
exactly one wall-clock unit (one algorithm iteration); in real mode the
elapsed time is recorded instead.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from mopls.errors import BatchEvaluationError
from mopls.problems import ProblemSpec


@dataclass
class BatchResult:
    outputs: list[tuple[np.ndarray, np.ndarray]]  # (point, objectives), submission order
    wall_units: int
    cpu_time: float


@dataclass
class BatchEvaluator:
    """Blocking batch evaluator for one problem.

    ``workers`` bounds the pool; None means one worker per batch point.
    """

    problem: ProblemSpec
    workers: int | None = None
    simulate_wall: bool = True
    total_evaluations: int = field(default=0, init=False)
    wall_clock: float = field(default=0.0, init=False)

    def evaluate_batch(self, points) -> BatchResult:
        points = [np.asarray(p, dtype=float) for p in points]
        if not points:
            raise ValueError("empty batch")
        nw = self.workers if self.workers is not None else len(points)
        start = time.perf_counter()
        with ThreadPoolExecutor(max_workers=max(1, nw)) as pool:
            futures = [pool.submit(self.problem.evaluate, p) for p in points]
            outputs = []
            for i, fut in enumerate(futures):
                try:
                    y = np.asarray(fut.result(), dtype=float)
                except Exception as exc:  # noqa: BLE001 - reported with index
                    raise BatchEvaluationError(i, exc) from exc
                outputs.append((points[i], y))
        elapsed = time.perf_counter() - start
        self.total_evaluations += len(points)
        if self.simulate_wall:
            self.wall_clock += 1
            wall = 1
        else:
            self.wall_clock += elapsed
            wall = 1
        return BatchResult(outputs=outputs, wall_units=wall, cpu_time=elapsed)
