from __future__ import annotations

import functools
import logging
from pathlib import Path
from typing import List, Optional

import click
from pydantic import ValidationError

from .bench.generators import AdditionStream
from .bench.harness import format_x, sweep, write_report_csv
from .clustering.batch import dbscan
from .clustering.incremental import InsertOutcome, batch_insert
from .clustering.policy import delta_stats, refresh, should_rerun
from .config import configure_logging, get_settings
from .errors import BatchInsertError, ClusteringError, InvalidInputError
from .ingest import load_csv
from .schemas import Metric, ModelSummary, OutlierRule, Params, RerunPolicy
from .store import load_model, save_model

logger = logging.getLogger("incdbscan.cli")

INPUT_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)
OUTPUT_FILE = click.Path(dir_okay=False, path_type=Path)


def _handle_errors(fn):
  """Turn engine and validation errors into a one-line diagnostic, exit 1."""

  @functools.wraps(fn)
  def wrapper(*args, **kwargs):
    try:
      return fn(*args, **kwargs)
    except click.ClickException:
      raise
    except ValidationError as exc:
      err = exc.errors()[0]
      field = ".".join(str(part) for part in err.get("loc", ())) or "input"
      raise click.ClickException(f"invalid {field}: {err.get('msg')}")
    except ClusteringError as exc:
      logger.debug("command failed", exc_info=True)
      raise click.ClickException(str(exc))

  return wrapper


def _echo_summary(summary: ModelSummary) -> None:
  click.echo(f"clusters: {summary.clusters}")
  click.echo(f"outliers: {summary.outliers}")


def _echo_outcomes(outcomes: List[InsertOutcome]) -> None:
  for outcome in outcomes:
    click.echo(outcome.describe())


def _parse_percent_list(raw: str) -> List[float]:
  try:
    values = [float(part) for part in raw.split(",") if part.strip()]
  except ValueError:
    raise InvalidInputError(f"--deltas must be a comma-separated list of percentages, got {raw!r}")
  if not values:
    raise InvalidInputError("--deltas is empty")
  return [v / 100.0 for v in values]


@click.group()
@click.option(
  "--log-level",
  type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
  default=None,
  help="Override INCDBSCAN_LOG_LEVEL (logs go to stderr).",
)
def cli(log_level: Optional[str]) -> None:
  """Batch and incremental DBSCAN with a rerun policy and a T1/T2 benchmark."""
  configure_logging(log_level)


# ----------------------
# cluster / insert / update
# ----------------------


@cli.command("cluster")
@click.option("--input", "input_path", type=INPUT_FILE, required=True)
@click.option("--eps", type=float, required=True)
@click.option("--minpts", type=int, required=True)
@click.option("--metric", type=click.Choice([m.value for m in Metric]), default=Metric.MANHATTAN.value, show_default=True)
@click.option("--out", "out_path", type=OUTPUT_FILE, required=True)
@_handle_errors
def cluster_command(input_path: Path, eps: float, minpts: int, metric: str, out_path: Path) -> None:
  """Run batch DBSCAN over a CSV of points and store the model."""
  params = Params(eps=eps, min_pts=minpts, metric=Metric(metric))
  dataset = load_csv(input_path)
  if not len(dataset):
    raise InvalidInputError(f"{input_path} contains no points")
  model = dbscan(dataset, params)
  save_model(model, out_path)
  _echo_summary(model.summary())


@cli.command("insert")
@click.option("--model", "model_path", type=INPUT_FILE, required=True)
@click.option("--input", "input_path", type=INPUT_FILE, required=True)
@click.option("--outlier-rule", type=click.Choice([r.value for r in OutlierRule]), default=None)
@click.option("--out", "out_path", type=OUTPUT_FILE, required=True)
@_handle_errors
def insert_command(model_path: Path, input_path: Path, outlier_rule: Optional[str], out_path: Path) -> None:
  """Insert new points into a stored model without reclustering."""
  model = load_model(model_path)
  if outlier_rule is not None:
    model = model.with_params(outlier_rule=OutlierRule(outlier_rule))
  additions = load_csv(input_path)
  try:
    updated, outcomes = batch_insert(model, additions.points)
  except BatchInsertError as exc:
    # report what went in, but leave the stored model untouched
    _echo_outcomes(exc.outcomes)
    raise
  save_model(updated, out_path)
  _echo_outcomes(outcomes)


@cli.command("update")
@click.option("--model", "model_path", type=INPUT_FILE, required=True)
@click.option("--input", "input_path", type=INPUT_FILE, required=True)
@click.option("--threshold", type=float, required=True, help="Threshold x in percent.")
@click.option("--out", "out_path", type=OUTPUT_FILE, required=True)
@_handle_errors
def update_command(model_path: Path, input_path: Path, threshold: float, out_path: Path) -> None:
  """Insert incrementally up to x% growth since the last full run, recluster beyond it."""
  model = load_model(model_path)
  policy = RerunPolicy(threshold_x=threshold)
  additions = load_csv(input_path)
  try:
    updated, result = refresh(model, additions.points, policy)
  except BatchInsertError as exc:
    _echo_outcomes(exc.outcomes)
    raise
  save_model(updated, out_path)
  click.echo(f"delta={result.stats.delta_percent!r}")
  click.echo(f"decision={result.decision.value}")
  _echo_outcomes(result.outcomes)
  _echo_summary(updated.summary())


# ----------------------
# delta / bench
# ----------------------


@cli.command("delta")
@click.option("--old", "old_size", type=int, required=True)
@click.option("--added", type=int, required=True)
@click.option("--threshold", type=float, default=None, help="Threshold x in percent.")
@_handle_errors
def delta_command(old_size: int, added: int, threshold: Optional[float]) -> None:
  """Print the delta change and, given a threshold, the rerun decision."""
  stats = delta_stats(old_size, added)
  click.echo(f"delta={stats.delta_percent!r}")
  if threshold is not None:
    decision = should_rerun(stats, RerunPolicy(threshold_x=threshold))
    click.echo(f"decision={decision.value}")


@cli.command("bench")
@click.option("--base", "base_path", type=INPUT_FILE, required=True)
@click.option("--deltas", default="1,2,5,10,20,50", show_default=True, help="Growth steps in percent.")
@click.option("--eps", type=float, required=True)
@click.option("--minpts", type=int, required=True)
@click.option("--repeats", type=int, default=None, help="Timing repeats per trial (median is kept).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--report", "report_path", type=OUTPUT_FILE, required=True)
@_handle_errors
def bench_command(
  base_path: Path, deltas: str, eps: float, minpts: int, repeats: Optional[int], seed: int, report_path: Path,
) -> None:
  """Sweep growth fractions, timing full reruns (T1) against incremental inserts (T2)."""
  settings = get_settings()
  params = Params(eps=eps, min_pts=minpts, outlier_rule=OutlierRule.DENSITY)
  base = load_csv(base_path)
  stream = AdditionStream(seed=seed, noise_fraction=settings.noise_fraction, dimension=base.dimension or None)
  report = sweep(
    base,
    stream,
    params,
    _parse_percent_list(deltas),
    repeats=repeats or settings.bench_repeats,
    agreement_floor=settings.agreement_floor,
    progress=settings.progress,
  )
  write_report_csv(report, report_path)
  click.echo(f"crossover_x={format_x(report.crossover_x)}")
  click.echo(f"recommended_x={format_x(report.recommended_x)}")


def main() -> None:
  cli(prog_name="incdbscan")


if __name__ == "__main__":
  main()
