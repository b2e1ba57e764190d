# app/clustering/incremental.py

"""
Incremental insertion into an existing clustering.

Each arriving point goes to the cluster of its nearest core object when that
core lies within eps and the cluster holds at least min_pts members;
everything else joins the outlier pool, and the pool may turn into new
clusters once it is large enough. Existing memberships are never revisited.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from app.errors import BatchInsertError, ClusteringError, DuplicateIdError
from app.schemas import OutlierRule, Point

from .batch import expand_clusters
from .model import ClusterModel, Dataset, check_dimension, row_distances

logger = logging.getLogger("incdbscan.incremental")


class OutcomeKind(str, Enum):
    ASSIGNED = "assigned"
    POOLED = "pooled_outlier"
    NEW_CLUSTER = "new_cluster_formed"


@dataclass(frozen=True)
class NearestCore:
    cluster_id: int
    core_id: int
    distance: float


@dataclass(frozen=True)
class FormedCluster:
    cluster_id: int
    members: FrozenSet[int]


@dataclass(frozen=True)
class InsertOutcome:
    point_id: int
    kind: OutcomeKind
    cluster_id: Optional[int] = None
    nearest: Optional[NearestCore] = None
    formed: Tuple[FormedCluster, ...] = ()

    @property
    def distance(self) -> Optional[float]:
        return None if self.nearest is None else self.nearest.distance

    @property
    def nearest_core_id(self) -> Optional[int]:
        return None if self.nearest is None else self.nearest.core_id

    @property
    def members(self) -> FrozenSet[int]:
        for formed in self.formed:
            if formed.cluster_id == self.cluster_id:
                return formed.members
        return frozenset()

    def describe(self) -> str:
        """One diffable line: id, outcome, cluster or pool."""
        where = "pool" if self.cluster_id is None else f"Cluster{self.cluster_id}"
        return f"{self.point_id} {self.kind.value} {where}"


def nearest_core(model: ClusterModel, p: Point) -> Optional[NearestCore]:
    check_dimension(model.dimension, p)
    cores = model.core_matrix
    if not len(cores):
        return None
    dists = row_distances(cores.view, np.asarray(p.coords, dtype=float), model.params.metric)
    best = dists.min()
    candidates = np.flatnonzero(dists == best)
    # ties: lower cluster id, then lower core id
    row = min(candidates.tolist(), key=lambda r: (int(cores.tags[r]), int(cores.ids[r])))
    return NearestCore(cluster_id=int(cores.tags[row]), core_id=int(cores.ids[row]), distance=float(best))


# ----------------------
# Outlier pool
# ----------------------


def _pool_dataset(model: ClusterModel) -> Dataset:
    rows = sorted(model.registry.row(i) for i in model.outliers)
    ids = model.registry.ids
    return Dataset([model.points[int(ids[r])] for r in rows], model.dimension or 0)


def _pool_may_cluster(model: ClusterModel, trigger: Point) -> bool:
    """
    With a settled pool only points within eps of the newcomer can have become
    cores, so a full pool run is needed only if one of them now is.
    """
    params = model.params
    matrix = model.registry.view[[model.registry.row(i) for i in model.outliers]]
    near = np.flatnonzero(row_distances(matrix, np.asarray(trigger.coords, dtype=float), params.metric) <= params.eps)
    for row in near.tolist():
        count = np.count_nonzero(row_distances(matrix, matrix[row], params.metric) <= params.eps)
        if count >= params.min_pts:
            return True
    return False


def _form_in_place(model: ClusterModel, trigger: Optional[Point] = None) -> List[FormedCluster]:
    params = model.params
    if len(model.outliers) < params.min_pts:
        # too small for any point to be core within it
        model.pool_settled = True
        return []

    if params.outlier_rule == OutlierRule.COUNT_ONLY:
        members = sorted(model.outliers)
        model.release_outliers(members)
        cluster_id = model.add_cluster(members, members)
        model.pool_settled = True
        logger.info("pool of %d outliers formed cluster %d", len(members), cluster_id)
        return [FormedCluster(cluster_id, frozenset(members))]

    if model.pool_settled and trigger is not None and not _pool_may_cluster(model, trigger):
        return []

    pool = _pool_dataset(model)
    found, _ = expand_clusters(pool, params)
    formed: List[FormedCluster] = []
    for member_rows, core_rows in found:
        members = [int(pool.ids[r]) for r in member_rows]
        model.release_outliers(members)
        cluster_id = model.add_cluster(members, (int(pool.ids[r]) for r in core_rows))
        formed.append(FormedCluster(cluster_id, frozenset(members)))
        logger.info("density run over the pool formed cluster %d with %d members", cluster_id, len(members))
    model.pool_settled = True
    return formed


def form_cluster_from_pool(model: ClusterModel) -> Tuple[ClusterModel, Optional[int]]:
    """
    Evaluate the pool-formation rule once. Returns the updated model and the
    first new cluster id; a density run that yields several clusters issues
    them consecutive ids starting there.
    """
    updated = model.copy()
    formed = _form_in_place(updated)
    return updated, (formed[0].cluster_id if formed else None)


# ----------------------
# Insertion
# ----------------------


def _insert_in_place(model: ClusterModel, p: Point) -> InsertOutcome:
    if p.id in model.points:
        raise DuplicateIdError(p.id, "already registered")
    check_dimension(model.dimension, p)
    params = model.params

    nearest = nearest_core(model, p)
    model.register(p)

    if (
        nearest is not None
        and nearest.distance <= params.eps
        and len(model.clusters[nearest.cluster_id].members) >= params.min_pts
    ):
        is_core = model.neighborhood_size(p) >= params.min_pts
        model.add_member(nearest.cluster_id, p.id, core=is_core)
        return InsertOutcome(p.id, OutcomeKind.ASSIGNED, cluster_id=nearest.cluster_id, nearest=nearest)

    model.add_outlier(p.id)
    if params.outlier_rule == OutlierRule.COUNT_ONLY:
        model.pool_settled = False
    formed = tuple(_form_in_place(model, trigger=p))
    home = model.cluster_of(p.id)
    if home is not None:
        return InsertOutcome(p.id, OutcomeKind.NEW_CLUSTER, cluster_id=home, nearest=nearest, formed=formed)
    return InsertOutcome(p.id, OutcomeKind.POOLED, nearest=nearest, formed=formed)


def insert(model: ClusterModel, p: Point) -> Tuple[ClusterModel, InsertOutcome]:
    updated = model.copy()
    outcome = _insert_in_place(updated, p)
    return updated, outcome


def batch_insert(model: ClusterModel, points: Iterable[Point]) -> Tuple[ClusterModel, List[InsertOutcome]]:
    updated = model.copy()
    outcomes: List[InsertOutcome] = []
    for p in points:
        try:
            outcomes.append(_insert_in_place(updated, p))
        except ClusteringError as exc:
            raise BatchInsertError(p.id, updated, outcomes, exc) from exc
    return updated, outcomes
