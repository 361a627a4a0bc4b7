"""The MOPLS iteration: center selection, per-worker surrogate candidate
search, and the memory-archive / tabu update, wrapped in the synchronous
master-worker outer loop.

Each iteration the master freezes an internal reference vector and hands
every worker task an immutable snapshot (decision/objective matrices, the
true Pareto front, one center, and a dedicated RNG stream keyed by worker
index), so results are bit-identical for any worker pool size.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from mopls import rbf
from mopls.core import EvaluationArchive, non_dominated_sort
from mopls.errors import EvaluationError, SelectionStarvationError
from mopls.executor import BatchEvaluator
from mopls.hypervolume import (
    hv_contributions,
    hv_exact,
    hv_improvement,
    hv_improvements_batch,
    running_reference,
)
from mopls.problems import ProblemSpec
from mopls.sampling import latin_hypercube, make_rng

_HI_ZERO_TOL = 1e-12
_GAUSS_MUTATION_SCALE = 0.1


@dataclass
class EngineParams:
    """Algorithm parameters (defaults follow the published settings)."""

    total_evals: int
    init_evals: int
    population: int
    r_init: float = 0.2
    prob_cand: float = 0.9
    prob_hv: float = 0.65
    c_thresh: int = 3
    c_tenure: int = 5
    n_cand_factor: int = 500
    mc_samples: int = 10_000
    training_cap: int = 500

    def __post_init__(self):
        if self.population < 1:
            raise ValueError("population must be >= 1")
        if self.total_evals <= self.init_evals:
            raise ValueError("total_evals must exceed init_evals")
        if self.r_init <= 0:
            raise ValueError("r_init must be positive")
        if not (0 <= self.prob_cand <= 1 and 0 <= self.prob_hv <= 1):
            raise ValueError("probabilities must lie in [0, 1]")


def default_init_evals(d: int) -> int:
    """Recommended initial design size, 2d + 2."""
    return 2 * d + 2


def d_thresh(m: int, params: EngineParams) -> float:
    """Radius-rule threshold: linear decay from 1 at m = E_I to 0 at m = E_T."""
    span = params.total_evals - params.init_evals
    return float(np.clip(1.0 - (m - params.init_evals) / span, 0.0, 1.0))


@dataclass
class CenterSelection:
    indices: list[int]


def _ranked_candidates(archive: EvaluationArchive, ref, limit: int | None):
    """Archive ordinals in selection order: front by front, each front sorted
    by descending hypervolume contribution (ties toward lower ordinal)."""
    Y = archive.objectives()
    fronts = non_dominated_sort(Y, stop_after=limit)
    ranked: list[int] = []
    for front in fronts:
        hc = hv_contributions(Y[front], ref)
        order = np.argsort(-hc, kind="stable")
        ranked.extend(int(front[i]) for i in order)
    return ranked


def select_centers(
    archive: EvaluationArchive,
    params: EngineParams,
    m: int,
    ref,
    iteration: int = 0,
) -> CenterSelection:
    """Center selection: non-dominated rank, then hypervolume
    contribution, skipping tabu points and points inside an already-selected
    center's (radius x d_thresh) ball.

    If the fronts exhaust before N centers are found, a second pass ignores
    the radius rule; if still short, top-ranked non-tabu points are reused.
    """
    non_tabu = len(archive) - len(archive.tabu_ids)
    if non_tabu == 0:
        raise SelectionStarvationError(iteration)
    N = params.population
    t = d_thresh(m, params)
    X = archive.decisions()
    # The radius rule can reject many early candidates; rank enough of the
    # archive to survive both fallback passes.
    ranked = _ranked_candidates(archive, ref, limit=None)

    selected: list[int] = []

    def radius_ok(idx: int) -> bool:
        for j in selected:
            rj = archive.points[j].memory.radius
            if np.linalg.norm(X[j] - X[idx]) <= rj * t:
                return False
        return True

    for idx in ranked:  # pass 1: tabu skip + radius rule
        if len(selected) == N:
            break
        if idx in archive.tabu_ids or not radius_ok(idx):
            continue
        selected.append(idx)
    if len(selected) < N:  # pass 2: radius rule disabled
        for idx in ranked:
            if len(selected) == N:
                break
            if idx in archive.tabu_ids or idx in selected:
                continue
            selected.append(idx)
    if len(selected) < N:  # pass 3: cycle top-ranked non-tabu points
        pool = [idx for idx in ranked if idx not in archive.tabu_ids]
        i = 0
        while len(selected) < N:
            selected.append(pool[i % len(pool)])
            i += 1
    return CenterSelection(indices=selected)


def generate_candidates(
    center: np.ndarray,
    radius: float,
    rng: np.random.Generator,
    d: int,
    n_cand_factor: int,
) -> np.ndarray:
    """Gaussian candidate cloud around ``center``: hyperspherical (scalar
    sigma = radius) or hyperellipsoidal (per-coordinate |N(r, r^2/4)|
    scales) with equal probability; out-of-bounds coordinates are clipped."""
    n = n_cand_factor * d
    if rng.random() <= 0.5:
        sigma = np.full(d, radius)
    else:
        sigma = np.abs(rng.normal(radius, radius / 2, size=d))
    cands = center[None, :] + rng.standard_normal((n, d)) * sigma[None, :]
    return np.clip(cands, 0.0, 1.0)


def mutate(center: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Gaussian or uniform mutation (equal probability), each coordinate
    mutated with probability 1/d; at least one coordinate always mutates."""
    d = len(center)
    gaussian = rng.random() < 0.5
    mask = rng.random(d) < 1.0 / d
    if not mask.any():
        mask[rng.integers(d)] = True
    out = center.copy()
    if gaussian:
        out[mask] = np.clip(
            out[mask] + rng.normal(0.0, _GAUSS_MUTATION_SCALE, size=int(mask.sum())),
            0.0,
            1.0,
        )
    else:
        out[mask] = rng.random(int(mask.sum()))
    return out


def worker_search(
    center_x: np.ndarray,
    center_radius: float,
    X: np.ndarray,
    Y: np.ndarray,
    pareto_Y: np.ndarray,
    ref: np.ndarray,
    params: EngineParams,
    rng: np.random.Generator,
) -> np.ndarray:
    """One worker's surrogate-assisted local candidate search.

    Returns the decision vector chosen for expensive evaluation. ``X``/``Y``
    are read-only snapshots of the archive, ``pareto_Y`` the true Pareto
    objective vectors, ``ref`` the iteration's frozen reference vector.
    """
    d = X.shape[1]
    if rng.random() <= params.prob_cand:
        models = rbf.fit_all_objectives(center_x, X, Y, cap=params.training_cap)
        cands = generate_candidates(center_x, center_radius, rng, d, params.n_cand_factor)
        preds = np.column_stack([mdl.predict_batch(cands) for mdl in models])
        from mopls.kernels import nondominated_mask

        nd = np.flatnonzero(nondominated_mask(preds))
        cand_nd = cands[nd]
        pred_nd = preds[nd]
        if rng.random() <= params.prob_hv:
            improvements = hv_improvements_batch(pareto_Y, pred_nd, ref)
            best = int(np.argmax(improvements))  # argmax takes the lowest tied index
        else:
            # Max-min: surrogate-non-dominated candidate farthest from all
            # evaluated points.
            sq = (
                np.sum(cand_nd**2, axis=1)[:, None]
                - 2 * cand_nd @ X.T
                + np.sum(X**2, axis=1)[None, :]
            )
            best = int(np.argmax(np.sqrt(np.maximum(sq, 0.0)).min(axis=1)))
        return cand_nd[best]
    return mutate(center_x, rng)


def update_memory_archive(
    archive: EvaluationArchive,
    centers: CenterSelection,
    new_points: list[tuple[np.ndarray, np.ndarray]],
    pareto_before: np.ndarray,
    ref: np.ndarray,
    params: EngineParams,
) -> list[int]:
    """Memory-archive update, then admission of the new batch.

    Phase 1: each new point's hypervolume improvement is measured against
    the pre-batch Pareto front (fixed once for the whole batch); a zero
    improvement halves the parent center's radius and bumps its failure
    count. Phase 2: tabu counts tick down (release at zero); non-tabu
    points whose failure count exceeds c_thresh enter the tabu list with
    tenure c_tenure, radius and failure count reset. Finally the new points
    are admitted and the Pareto set recomputed. Returns the new ids.
    """
    if len(new_points) != len(centers.indices):
        raise ValueError("one new point per center expected")
    for pid in centers.indices:
        if pid >= len(archive):
            raise ValueError(f"parent index {pid} not in archive")

    for (x_new, y_new), parent in zip(new_points, centers.indices):
        hi = hv_improvement(pareto_before, y_new, ref)
        if hi <= _HI_ZERO_TOL:
            mem = archive.points[parent].memory
            mem.radius /= 2
            mem.failure_count += 1

    for pt in archive.points:  # pre-existing points only; batch not yet admitted
        mem = pt.memory
        if mem.tabu_count > 0:
            mem.tabu_count -= 1
            if mem.tabu_count == 0:
                archive.clear_tabu(pt.id)
        elif mem.failure_count > params.c_thresh:
            archive.set_tabu(pt.id, params.c_tenure)
            mem.radius = params.r_init
            mem.failure_count = 0

    new_ids = [archive.add(x, y, radius=params.r_init).id for x, y in new_points]
    archive.recompute_pareto()
    return new_ids


@dataclass
class IterationRow:
    iteration: int
    m: int
    new_ids: list[int]
    pareto_ids: list[int]
    hv: float
    hc: float | None
    tabu_size: int
    radii: tuple[float, float, float]  # min, median, max


@dataclass
class RunResult:
    pareto_decisions: np.ndarray
    pareto_objectives: np.ndarray
    trace: list[IterationRow] = field(default_factory=list)
    archive: EvaluationArchive | None = None
    init_hv: float = 0.0
    evaluations: int = 0
    iterations: int = 0


def _finite_or_raise(y: np.ndarray, where: str) -> None:
    if not np.all(np.isfinite(y)):
        raise EvaluationError(f"non-finite objectives from {where}: {y}")


def run(
    problem: ProblemSpec,
    params: EngineParams,
    seed: int,
    evaluator: BatchEvaluator,
    wall_budget: int | None = None,
    search_workers: int | None = None,
    hv_star: float | None = None,
) -> RunResult:
    """Full MOPLS run: LHS initialization, then synchronous iterations of
    center selection, parallel candidate search, batch evaluation, and
    memory update, until the evaluation budget (or wall budget) runs out.

    Deterministic given (seed, params, problem) for any worker pool size.
    ``hv_star`` (reporting-reference hypervolume of the ideal front) enables
    per-iteration hypervolume coverage in the trace.
    """
    d, k, N = problem.d, problem.k, params.population
    rep_ref = np.asarray(problem.reporting_ref, dtype=float)
    archive = EvaluationArchive(d, k)

    design = latin_hypercube(params.init_evals, d, make_rng(seed, 0))
    batch = evaluator.evaluate_batch(design)
    for x, y in batch.outputs:
        _finite_or_raise(y, "initial design")
        archive.add(x, y, radius=params.r_init)
    archive.recompute_pareto()

    init_hv = hv_exact(archive.pareto_objectives(), rep_ref)
    denom = None if hv_star is None else hv_star - init_hv

    def coverage() -> tuple[float, float | None]:
        hv = hv_exact(archive.pareto_objectives(), rep_ref)
        if denom is None or denom <= 0:
            return hv, None
        return hv, (hv - init_hv) / denom

    trace: list[IterationRow] = []
    m = len(archive)
    iteration = 0
    pool_size = search_workers if search_workers is not None else (evaluator.workers or N)

    while m < params.total_evals and (wall_budget is None or iteration < wall_budget):
        iteration += 1
        ref = running_reference(archive.objectives())
        centers = select_centers(archive, params, m, ref, iteration)
        pareto_before = archive.pareto_objectives()
        X = np.array(archive.decisions())
        Y = np.array(archive.objectives())

        def task(i: int, retry: int = 0) -> np.ndarray:
            c = archive.points[centers.indices[i]]
            rng = make_rng(seed, 1 + retry, iteration, i)
            return worker_search(
                c.decision, c.memory.radius, X, Y, pareto_before, ref, params, rng
            )

        with ThreadPoolExecutor(max_workers=max(1, pool_size)) as pool:
            proposals = list(pool.map(task, range(N)))
        batch = evaluator.evaluate_batch(proposals)
        results = []
        for i, (x, y) in enumerate(batch.outputs):
            if not np.all(np.isfinite(y)):
                # One retry with a fresh stream; a second failure aborts.
                x = task(i, retry=1)
                y = evaluator.evaluate_batch([x]).outputs[0][1]
                _finite_or_raise(y, f"worker {i} retry at iteration {iteration}")
            results.append((x, y))

        new_ids = update_memory_archive(archive, centers, results, pareto_before, ref, params)
        m = len(archive)
        hv, hc = coverage()
        radii = np.array([p.memory.radius for p in archive.points])
        trace.append(
            IterationRow(
                iteration=iteration,
                m=m,
                new_ids=new_ids,
                pareto_ids=sorted(archive.pareto_ids),
                hv=hv,
                hc=hc,
                tabu_size=len(archive.tabu_ids),
                radii=(float(radii.min()), float(np.median(radii)), float(radii.max())),
            )
        )

    ids = sorted(archive.pareto_ids)
    return RunResult(
        pareto_decisions=archive.decisions()[ids],
        pareto_objectives=archive.objectives()[ids],
        trace=trace,
        archive=archive,
        init_hv=init_hv,
        evaluations=len(archive),
        iterations=iteration,
    )
