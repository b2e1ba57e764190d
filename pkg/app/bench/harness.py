# app/bench/harness.py

"""
T1 vs T2: full DBSCAN on the grown database against incremental insertion
into the stored model, over a sweep of growth fractions.

Trials run one after another on the calling thread. Everything that is not
the clustering itself (generation, validation, the stored model, report
output) happens outside the timed regions.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import statistics
import time
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

from tqdm import tqdm

from app.clustering.batch import dbscan
from app.clustering.incremental import batch_insert
from app.clustering.model import ClusterModel, Dataset
from app.errors import InvalidInputError
from app.schemas import BenchReport, Params, TrialResult

from .agreement import rand_index
from .generators import AdditionStream

logger = logging.getLogger("incdbscan.bench")

DEFAULT_REPEATS = 5
DEFAULT_AGREEMENT_FLOOR = 0.95
REPORT_HEADER = ["delta_percent", "t1_seconds", "t2_seconds", "speedup", "rand_index"]

T = TypeVar("T")


def _timed(fn: Callable[[], T], repeats: int) -> Tuple[float, T]:
    timings = []
    result = None
    for _ in range(repeats):
        started = time.perf_counter()
        result = fn()
        timings.append(time.perf_counter() - started)
    return statistics.median(timings), result


def run_trial(
    base: Dataset,
    additions: Dataset,
    params: Params,
    repeats: int = DEFAULT_REPEATS,
    stored: Optional[ClusterModel] = None,
    delta_fraction: Optional[float] = None,
) -> TrialResult:
    if repeats < 1:
        raise InvalidInputError(f"repeats must be at least 1, got {repeats}")
    collisions = [p.id for p in additions if p.id in base]
    if collisions:
        raise InvalidInputError(f"addition ids collide with the base: {collisions[:5]}")

    if stored is None:
        stored = dbscan(base, params)
    union = base.union(additions)

    t1, full = _timed(lambda: dbscan(union, params), repeats)
    t2, (incremental, _) = _timed(lambda: batch_insert(stored, additions.points), repeats)
    agreement = rand_index(incremental.labels(), full.labels())

    fraction = delta_fraction if delta_fraction is not None else (len(additions) / len(base) if len(base) else 0.0)
    speedup = t1 / t2 if t2 > 0 else math.inf
    logger.info(
        "trial delta=%.2f%% added=%d t1=%.4fs t2=%.4fs speedup=%.2f rand=%.4f",
        fraction * 100, len(additions), t1, t2, speedup, agreement,
    )
    return TrialResult(
        delta_fraction=fraction, added=len(additions), t1=t1, t2=t2, speedup=speedup, agreement=agreement,
    )


def summarize(trials: Sequence[TrialResult], agreement_floor: float = DEFAULT_AGREEMENT_FLOOR) -> BenchReport:
    ordered = sorted(trials, key=lambda t: t.delta_fraction)
    crossover = next((t.delta_percent for t in ordered if t.t2 >= t.t1), None)
    recommended = None
    for t in ordered:
        if t.agreement >= agreement_floor and t.t2 < t.t1:
            recommended = t.delta_percent
    return BenchReport(
        trials=list(ordered), agreement_floor=agreement_floor, crossover_x=crossover, recommended_x=recommended,
    )


def sweep(
    base: Dataset,
    generator: AdditionStream,
    params: Params,
    deltas: Sequence[float],
    repeats: int = DEFAULT_REPEATS,
    agreement_floor: float = DEFAULT_AGREEMENT_FLOOR,
    progress: bool = False,
) -> BenchReport:
    if not deltas:
        raise InvalidInputError("at least one delta is required")
    if any(not 0.0 < d <= 1.0 for d in deltas):
        raise InvalidInputError(f"deltas must lie in (0, 1], got {list(deltas)}")
    if list(deltas) != sorted(deltas):
        raise InvalidInputError(f"deltas must be sorted ascending, got {list(deltas)}")
    if not len(base):
        raise InvalidInputError("base dataset is empty")

    stored = dbscan(base, params)
    counts = [max(1, round(d * len(base))) for d in deltas]
    # one stream; each trial takes a prefix of it
    stream = generator.draw(stored, base, max(counts))

    trials: List[TrialResult] = []
    for delta, count in tqdm(list(zip(deltas, counts)), desc="sweep", unit="delta", disable=not progress):
        trials.append(
            run_trial(base, stream.head(count), params, repeats=repeats, stored=stored, delta_fraction=delta)
        )
    return summarize(trials, agreement_floor)


# ----------------------
# Report output
# ----------------------


def format_x(value: Optional[float]) -> str:
    return "none" if value is None else f"{value:g}"


def report_rows(report: BenchReport) -> List[List[str]]:
    return [
        [
            f"{t.delta_percent:g}",
            f"{t.t1:.6f}",
            f"{t.t2:.6f}",
            f"{t.speedup:.3f}",
            f"{t.agreement:.6f}",
        ]
        for t in report.trials
    ]


def report_footer(report: BenchReport) -> List[str]:
    return [
        f"# crossover_x={format_x(report.crossover_x)}",
        f"# recommended_x={format_x(report.recommended_x)}",
        f"# agreement_floor={report.agreement_floor:g}",
    ]


def format_report(report: BenchReport) -> str:
    """Header, one row per trial, then the `#` summary lines."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    writer.writerows(report_rows(report))
    for line in report_footer(report):
        buffer.write(line + "\n")
    return buffer.getvalue()


def write_report_csv(report: BenchReport, path: Path) -> None:
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as fh:
            fh.write(format_report(report))
    except OSError as exc:
        raise InvalidInputError(f"cannot write {path}: {exc.strerror}") from exc
