# app/clustering/policy.py

"""
Delta-change computation and the rerun decision.

Up to x% growth over the database that was last clustered in full, the
incremental result is kept; beyond x% the whole database is clustered again.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from app.errors import InvalidInputError, UndefinedBaselineError
from app.schemas import Decision, DeltaStats, Point, RerunPolicy

from .batch import dbscan
from .incremental import InsertOutcome, batch_insert
from .model import ClusterModel, validate_dataset

logger = logging.getLogger("incdbscan.policy")


def delta_percent(old_size: int, added: int) -> float:
    if old_size < 0 or added < 0:
        raise InvalidInputError(f"sizes must be non-negative (old={old_size}, added={added})")
    if old_size == 0:
        raise UndefinedBaselineError("delta is undefined for an empty original database")
    return added / old_size * 100.0


def delta_stats(old_size: int, added: int) -> DeltaStats:
    return DeltaStats(old_size=old_size, added=added, delta_percent=delta_percent(old_size, added))


def should_rerun(stats: DeltaStats, policy: RerunPolicy) -> Decision:
    # boundary: exactly x% still keeps the previous result
    if stats.delta_percent > policy.threshold_x:
        return Decision.RERUN_FULL
    return Decision.USE_INCREMENTAL


@dataclass
class RefreshResult:
    stats: DeltaStats
    decision: Decision
    outcomes: List[InsertOutcome] = field(default_factory=list)


def refresh(model: ClusterModel, points: Sequence[Point], policy: RerunPolicy) -> Tuple[ClusterModel, RefreshResult]:
    """
    Apply new points under the rerun policy. Growth is measured against the
    size of the database at the last full run, so it accumulates across
    incremental sessions.
    """
    since_baseline = len(model.points) - model.baseline_size
    stats = delta_stats(model.baseline_size, since_baseline + len(points))
    decision = should_rerun(stats, policy)

    if decision == Decision.USE_INCREMENTAL:
        updated, outcomes = batch_insert(model, points)
        return updated, RefreshResult(stats, decision, outcomes)

    logger.info(
        "delta %.3f%% exceeds threshold %.3f%%; reclustering %d points",
        stats.delta_percent, policy.threshold_x, len(model.points) + len(points),
    )
    dataset = validate_dataset([*model.registry_order(), *points])
    return dbscan(dataset, model.params), RefreshResult(stats, decision)
