# app/clustering/batch.py

"""
Batch DBSCAN over a validated Dataset.
Region queries are linear scans; there is no spatial index.
"""

from __future__ import annotations

import logging
from collections import deque
from enum import Enum
from typing import Dict, List, Set, Tuple

import numpy as np

from app.schemas import Params, Point

from .model import ClusterModel, Dataset, check_dimension, row_distances

logger = logging.getLogger("incdbscan.batch")


class PointLabel(str, Enum):
    CORE = "core"
    BORDER = "border"
    NOISE = "noise"


def _neighbor_rows(dataset: Dataset, center: np.ndarray, params: Params) -> np.ndarray:
    dists = row_distances(dataset.matrix, center, params.metric)
    return np.flatnonzero(dists <= params.eps)


def _neighborhoods(dataset: Dataset, params: Params) -> List[List[int]]:
    matrix = dataset.matrix
    return [_neighbor_rows(dataset, matrix[row], params).tolist() for row in range(len(dataset))]


def region_query(dataset: Dataset, center: Point, params: Params) -> Set[int]:
    """Ids of every dataset point within eps of `center` (inclusive)."""
    check_dimension(dataset.dimension, center)
    if not len(dataset):
        return set()
    rows = _neighbor_rows(dataset, np.asarray(center.coords, dtype=float), params)
    return {int(i) for i in dataset.ids[rows]}


def label_points(dataset: Dataset, params: Params) -> Dict[int, PointLabel]:
    neighborhoods = _neighborhoods(dataset, params)
    is_core = [len(nb) >= params.min_pts for nb in neighborhoods]
    labels: Dict[int, PointLabel] = {}
    for row, p in enumerate(dataset):
        if is_core[row]:
            labels[p.id] = PointLabel.CORE
        elif any(is_core[nb] for nb in neighborhoods[row]):
            labels[p.id] = PointLabel.BORDER
        else:
            labels[p.id] = PointLabel.NOISE
    return labels


def expand_clusters(dataset: Dataset, params: Params) -> Tuple[List[Tuple[List[int], List[int]]], List[int]]:
    """
    Classic seed-and-expand pass over dataset rows.
    Returns ((member rows, core rows) per cluster in expansion order, noise rows).
    """
    neighborhoods = _neighborhoods(dataset, params)
    is_core = [len(nb) >= params.min_pts for nb in neighborhoods]
    assigned = [False] * len(dataset)
    found = []

    for seed in range(len(dataset)):
        if assigned[seed] or not is_core[seed]:
            continue
        assigned[seed] = True
        members, cores = [seed], [seed]
        queue = deque([seed])
        while queue:
            current = queue.popleft()
            for nb in neighborhoods[current]:
                if assigned[nb]:
                    continue
                # A border already claimed by an earlier cluster stays there.
                assigned[nb] = True
                members.append(nb)
                if is_core[nb]:
                    cores.append(nb)
                    queue.append(nb)
        found.append((members, cores))

    noise = [row for row in range(len(dataset)) if not assigned[row]]
    return found, noise


def dbscan(dataset: Dataset, params: Params) -> ClusterModel:
    model = ClusterModel(params, baseline_size=len(dataset))
    for p in dataset:
        model.register(p)

    found, noise = expand_clusters(dataset, params)
    ids = dataset.ids
    for members, cores in found:
        model.add_cluster((int(ids[r]) for r in members), (int(ids[r]) for r in cores))
    for row in noise:
        model.add_outlier(int(ids[row]))

    # Noise is non-core over the whole dataset, hence non-core within the pool.
    model.pool_settled = True
    logger.debug(
        "dbscan n=%d eps=%s min_pts=%d -> %d clusters, %d noise",
        len(dataset), params.eps, params.min_pts, len(found), len(noise),
    )
    return model
