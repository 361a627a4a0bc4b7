"""Command-line interface: run experiments, aggregate records, plot
progress, and compute speed-up tables.

Flags override values from an optional YAML config file.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from mopls import experiment


def _collect_records(records_dir: str) -> list[Path]:
    paths = sorted(Path(records_dir).glob("*.jsonl"))
    if not paths:
        raise click.ClickException(f"no .jsonl records under {records_dir}")
    return paths


@click.group()
def main():
    """MOPLS-N experiment runner."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--problem", default=None, help="e.g. zdt1 or zdt1-d8")
@click.option("--dim", type=int, default=None)
@click.option("--algo", "algorithm", type=click.Choice(experiment.ALGORITHMS), default=None)
@click.option("--pop", "population", type=int, default=None, help="centers per iteration (N)")
@click.option("--budget", type=int, default=None, help="total expensive evaluations")
@click.option("--wall-budget", type=int, default=None, help="max iterations (wall units)")
@click.option("--trials", type=int, default=None)
@click.option("--seed-base", type=int, default=None)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.option("--workers", type=int, default=None)
@click.option("--delay", type=float, default=None, help="simulated seconds per evaluation")
def run(config_path, **flags):
    """Run an experiment (all trials) and write records + aggregate."""
    if config_path:
        cfg = experiment.load_config(config_path, overrides=flags)
    else:
        missing = [k for k in ("problem", "dim") if flags.get(k) is None]
        if missing:
            raise click.ClickException(f"missing required flags: {missing}")
        defaults = experiment.ExperimentConfig(problem="zdt1", dim=8)
        merged = {
            k: (flags[k] if flags.get(k) is not None else getattr(defaults, k))
            for k in flags
        }
        cfg = experiment.ExperimentConfig(**merged)
    paths = experiment.run_experiment(cfg)
    for p in paths:
        click.echo(f"wrote {p}")
    click.echo(f"aggregate: {Path(cfg.out_dir) / 'aggregate.csv'}")


@main.command()
@click.option("--records", "records_dir", type=click.Path(exists=True), required=True)
@click.option("--out", "out_csv", type=click.Path(), default=None)
def aggregate(records_dir, out_csv):
    """Rebuild the aggregate CSV from raw trial records."""
    paths = _collect_records(records_dir)
    out = out_csv or str(Path(records_dir) / "aggregate.csv")
    experiment.aggregate(paths, Path(out))
    click.echo(f"wrote {out}")


@main.command()
@click.option("--records", "records_dir", type=click.Path(exists=True), required=True)
@click.option("--out", "out_svg", type=click.Path(), default=None)
@click.option("--title", default="")
def plot(records_dir, out_svg, title):
    """Emit an SVG coverage-progress plot from trial records."""
    paths = _collect_records(records_dir)
    out = out_svg or str(Path(records_dir) / "progress.svg")
    experiment.plot_progress(paths, Path(out), title=title)
    click.echo(f"wrote {out}")


@main.command()
@click.option("--records", "records_dir", type=click.Path(exists=True), required=True)
@click.option("--target-hc", type=float, required=True, help="target coverage alpha")
@click.option(
    "--baseline-time",
    type=float,
    default=400.0,
    show_default=True,
    help="serial baseline time (evaluations) to the same target",
)
def speedup(records_dir, target_hc, baseline_time):
    """Speed-up of the recorded runs against a serial baseline."""
    paths = _collect_records(records_dir)
    table = experiment.speedup_table(paths, target_hc, baseline_time)
    click.echo(json.dumps(table, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
