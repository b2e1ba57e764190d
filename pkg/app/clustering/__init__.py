"""
Density-based clustering: batch DBSCAN, its brute-force oracle, incremental
insertion and the rerun policy.
"""

from .batch import PointLabel, dbscan, label_points, region_query
from .incremental import (
    InsertOutcome,
    NearestCore,
    OutcomeKind,
    batch_insert,
    form_cluster_from_pool,
    insert,
    nearest_core,
)
from .model import Cluster, ClusterModel, Dataset, distance, validate_dataset
from .oracle import oracle_dbscan
from .policy import RefreshResult, delta_percent, delta_stats, refresh, should_rerun

__all__ = [
    "Cluster",
    "ClusterModel",
    "Dataset",
    "InsertOutcome",
    "NearestCore",
    "OutcomeKind",
    "PointLabel",
    "RefreshResult",
    "batch_insert",
    "dbscan",
    "delta_percent",
    "delta_stats",
    "distance",
    "form_cluster_from_pool",
    "insert",
    "label_points",
    "nearest_core",
    "oracle_dbscan",
    "refresh",
    "region_query",
    "should_rerun",
    "validate_dataset",
]
