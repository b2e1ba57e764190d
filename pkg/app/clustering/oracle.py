# app/clustering/oracle.py

"""
Brute-force DBSCAN used only to check `batch.dbscan`.
Full distance matrix, transitive closure of the core graph by repeated
boolean squaring, borders to the lowest eligible cluster id. O(n^3 log n);
keep n in the low hundreds.
"""

from __future__ import annotations

import numpy as np

from app.schemas import Params

from .model import ClusterModel, Dataset, distance_matrix


def _transitive_closure(adjacency: np.ndarray) -> np.ndarray:
    reach = adjacency.copy()
    while True:
        weights = reach.astype(float)
        widened = reach | ((weights @ weights) > 0)
        if np.array_equal(widened, reach):
            return reach
        reach = widened


def oracle_dbscan(dataset: Dataset, params: Params) -> ClusterModel:
    n = len(dataset)
    if n == 0:
        return ClusterModel.from_assignment(params, [])

    adjacent = distance_matrix(dataset.matrix, params.metric) <= params.eps
    is_core = adjacent.sum(axis=1) >= params.min_pts
    core_graph = adjacent & is_core[:, None] & is_core[None, :]
    reach = _transitive_closure(core_graph)

    labels = np.zeros(n, dtype=np.int64)
    next_id = 0
    for row in np.flatnonzero(is_core):
        if labels[row]:
            continue
        next_id += 1
        labels[reach[row] & is_core] = next_id

    for row in np.flatnonzero(~is_core):
        eligible = labels[adjacent[row] & is_core]
        if eligible.size:
            labels[row] = eligible.min()

    ids = dataset.ids
    clusters = []
    for cluster_id in range(1, next_id + 1):
        in_cluster = labels == cluster_id
        clusters.append((ids[in_cluster].tolist(), ids[in_cluster & is_core].tolist()))
    outliers = ids[labels == 0].tolist()
    model = ClusterModel.from_assignment(params, dataset.points, clusters, outliers)
    model.pool_settled = True
    return model
