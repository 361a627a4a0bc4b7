"""Experiment harness: declarative configs, per-trial JSONL records,
aggregate CSVs, SVG progress plots, and speed-up tables.

Each trial writes one JSON-lines file (header line, one row per iteration,
final line with the Pareto set), so aggregates and plots are recomputable
from the raw records without re-running any optimization.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from mopls import engine
from mopls.executor import BatchEvaluator
from mopls.hypervolume import hv_exact
from mopls.metrics import iterations_to_target
from mopls.problems import ProblemSpec, expensive_wrapper, get_problem
from mopls.sampling import latin_hypercube, make_rng

SCHEMA_VERSION = 1
PSTAR_SAMPLE_SIZE = 1000

ALGORITHMS = ("mopls", "random-search")


@dataclass
class ExperimentConfig:
    problem: str
    dim: int
    algorithm: str = "mopls"
    population: int = 4
    budget: int = 400  # total expensive evaluations E_T
    wall_budget: int | None = None
    trials: int = 10
    seed_base: int = 0
    workers: int | None = None
    delay: float = 0.0
    out_dir: str = "results"
    params: dict = field(default_factory=dict)  # EngineParams overrides

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}")

    @property
    def seeds(self) -> list[int]:
        return [self.seed_base + i for i in range(self.trials)]

    def resolve_problem(self) -> ProblemSpec:
        prob = get_problem(self.problem, self.dim)
        return expensive_wrapper(prob, self.delay)

    def engine_params(self) -> engine.EngineParams:
        kwargs = dict(
            total_evals=self.budget,
            init_evals=engine.default_init_evals(self.dim),
            population=self.population,
        )
        kwargs.update(self.params)
        return engine.EngineParams(**kwargs)

    def trial_path(self, seed: int) -> Path:
        tag = f"{self.problem}-d{self.dim}_{self.algorithm}_N{self.population}_seed{seed}"
        return Path(self.out_dir) / f"{tag}.jsonl"


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Read a YAML config file; non-None overrides win over file values."""
    import yaml

    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    if overrides:
        data.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**data)


def _pstar_hv(problem: ProblemSpec) -> float | None:
    if problem.pareto_front_sampler is None:
        return None
    front = problem.pareto_front_sampler(PSTAR_SAMPLE_SIZE)
    return hv_exact(front, problem.reporting_ref)


def _random_search(problem, params, seed, evaluator, wall_budget, hv_star):
    """Budget-matched baseline: LHS init, then uniform batches of N."""
    from mopls.core import EvaluationArchive

    d, k, N = problem.d, problem.k, params.population
    rep_ref = np.asarray(problem.reporting_ref, dtype=float)
    archive = EvaluationArchive(d, k)
    rng = make_rng(seed, 0)
    for x, y in evaluator.evaluate_batch(latin_hypercube(params.init_evals, d, rng)).outputs:
        archive.add(x, y, radius=params.r_init)
    archive.recompute_pareto()
    init_hv = hv_exact(archive.pareto_objectives(), rep_ref)
    denom = None if hv_star is None else hv_star - init_hv
    trace = []
    iteration = 0
    while len(archive) < params.total_evals and (
        wall_budget is None or iteration < wall_budget
    ):
        iteration += 1
        pts = rng.random((N, d))
        new_ids = []
        for x, y in evaluator.evaluate_batch(pts).outputs:
            new_ids.append(archive.add(x, y, radius=params.r_init).id)
        archive.recompute_pareto()
        hv = hv_exact(archive.pareto_objectives(), rep_ref)
        hc = None if (denom is None or denom <= 0) else (hv - init_hv) / denom
        trace.append(
            engine.IterationRow(
                iteration=iteration,
                m=len(archive),
                new_ids=new_ids,
                pareto_ids=sorted(archive.pareto_ids),
                hv=hv,
                hc=hc,
                tabu_size=0,
                radii=(params.r_init, params.r_init, params.r_init),
            )
        )
    ids = sorted(archive.pareto_ids)
    return engine.RunResult(
        pareto_decisions=archive.decisions()[ids],
        pareto_objectives=archive.objectives()[ids],
        trace=trace,
        archive=archive,
        init_hv=init_hv,
        evaluations=len(archive),
        iterations=iteration,
    )


def run_trial(config: ExperimentConfig, seed: int) -> Path:
    """Execute one trial and persist its record; returns the record path."""
    problem = config.resolve_problem()
    params = config.engine_params()
    evaluator = BatchEvaluator(
        problem, workers=config.workers, simulate_wall=config.delay == 0
    )
    hv_star = _pstar_hv(problem)
    runner = engine.run if config.algorithm == "mopls" else _random_search
    result = runner(
        problem,
        params,
        seed,
        evaluator,
        wall_budget=config.wall_budget,
        hv_star=hv_star,
    )
    path = config.trial_path(seed)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_record(path, config, seed, result)
    return path


def write_record(path: Path, config: ExperimentConfig, seed: int, result) -> None:
    with open(path, "w") as fh:
        header = {
            "kind": "header",
            "schema_version": SCHEMA_VERSION,
            "seed": seed,
            "config": asdict(config),
        }
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for row in result.trace:
            payload = {"kind": "row", **asdict(row)}
            fh.write(json.dumps(payload, sort_keys=True) + "\n")
        final = {
            "kind": "final",
            "init_hv": result.init_hv,
            "evaluations": result.evaluations,
            "iterations": result.iterations,
            "pareto_decisions": result.pareto_decisions.tolist(),
            "pareto_objectives": result.pareto_objectives.tolist(),
        }
        fh.write(json.dumps(final, sort_keys=True) + "\n")


def read_record(path) -> dict:
    """Load one JSONL trial record into {header, rows, final}."""
    header = rows = final = None
    rows = []
    with open(path) as fh:
        for line in fh:
            obj = json.loads(line)
            if obj["kind"] == "header":
                header = obj
            elif obj["kind"] == "row":
                rows.append(obj)
            else:
                final = obj
    return {"header": header, "rows": rows, "final": final}


def run_experiment(config: ExperimentConfig) -> list[Path]:
    """Run all trials, then write the aggregate CSV and progress plot."""
    paths = []
    for seed in config.seeds:
        try:
            paths.append(run_trial(config, seed))
        except Exception as exc:  # noqa: BLE001 - partial failures are recorded
            warnings.warn(f"trial seed={seed} failed: {exc!r}", stacklevel=2)
    if paths:
        aggregate(paths, Path(config.out_dir) / "aggregate.csv")
    return paths


def aggregate(record_paths, out_csv: Path) -> Path:
    """Per-iteration mean/median H_c and H_v across trials (a pure fold)."""
    records = [read_record(p) for p in record_paths]
    n_iters = max((len(r["rows"]) for r in records), default=0)
    out_csv = Path(out_csv)
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    with open(out_csv, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["iteration", "m", "trials", "hc_mean", "hc_median", "hv_mean", "hv_median"]
        )
        for i in range(n_iters):
            hcs, hvs, ms = [], [], []
            for r in records:
                if i < len(r["rows"]):
                    row = r["rows"][i]
                    if row["hc"] is not None:
                        hcs.append(row["hc"])
                    hvs.append(row["hv"])
                    ms.append(row["m"])
            writer.writerow(
                [
                    i + 1,
                    int(np.median(ms)),
                    len(hvs),
                    np.mean(hcs) if hcs else "",
                    np.median(hcs) if hcs else "",
                    np.mean(hvs),
                    np.median(hvs),
                ]
            )
    return out_csv


def plot_progress(record_paths, out_svg: Path, title: str = "") -> Path:
    """Static SVG: mean coverage vs iterations and vs evaluations."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    records = [read_record(p) for p in record_paths]
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for r in records:
        rows = r["rows"]
        iters = [row["iteration"] for row in rows]
        ms = [row["m"] for row in rows]
        hcs = [row["hc"] for row in rows]
        label = f"seed {r['header']['seed']}"
        axes[0].plot(iters, hcs, alpha=0.6, label=label)
        axes[1].plot(ms, hcs, alpha=0.6)
    axes[0].set_xlabel("iterations (wall-clock units)")
    axes[1].set_xlabel("expensive evaluations")
    for ax in axes:
        ax.set_ylabel("hypervolume coverage")
        ax.grid(True, alpha=0.3)
    if title:
        fig.suptitle(title)
    if len(records) <= 10:
        axes[0].legend(fontsize=7)
    out_svg = Path(out_svg)
    out_svg.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(out_svg, format="svg")
    plt.close(fig)
    return out_svg


def speedup_table(record_paths, target_hc: float, baseline_time: float) -> dict:
    """Iterations-to-target from the trial-averaged coverage curve.

    The baseline time defaults (at the CLI) to a serial 400-evaluation run;
    an unreached target yields a flagged entry instead of a number.
    """
    records = [read_record(p) for p in record_paths]
    n_iters = max((len(r["rows"]) for r in records), default=0)
    mean_hc = []
    for i in range(n_iters):
        vals = [
            r["rows"][i]["hc"]
            for r in records
            if i < len(r["rows"]) and r["rows"][i]["hc"] is not None
        ]
        mean_hc.append(np.mean(vals) if vals else None)
    t_a = iterations_to_target(mean_hc, target_hc)
    if t_a is None:
        reached = [v for v in mean_hc if v is not None]
        return {
            "target_hc": target_hc,
            "reached": False,
            "max_hc": max(reached) if reached else None,
        }
    return {
        "target_hc": target_hc,
        "reached": True,
        "iterations": t_a,
        "baseline_time": baseline_time,
        "speedup": baseline_time / t_a,
    }
