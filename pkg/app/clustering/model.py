# app/clustering/model.py

"""
Shared domain types: distance metrics, validated datasets and the cluster
model that both the batch and the incremental algorithms read and write.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from app.errors import (
    DimensionMismatchError,
    DuplicateIdError,
    NonFiniteCoordinateError,
    PartitionError,
)
from app.schemas import Metric, ModelSummary, Params, Point


# ----------------------
# Distances
# ----------------------


def row_distances(matrix: np.ndarray, center: np.ndarray, metric: Metric) -> np.ndarray:
    """
    Distance from every row of `matrix` to `center`.
    The scalar `distance` goes through here too, so every eps comparison in the
    package sees bit-identical values.
    """
    diff = matrix - center
    if metric == Metric.MANHATTAN:
        return np.abs(diff).sum(axis=1)
    return np.sqrt((diff * diff).sum(axis=1))


def distance(a: Point, b: Point, metric: Metric = Metric.MANHATTAN) -> float:
    if a.dimension != b.dimension:
        raise DimensionMismatchError(a.dimension, b.dimension, point_id=b.id)
    lhs = np.asarray(a.coords, dtype=float).reshape(1, -1)
    return float(row_distances(lhs, np.asarray(b.coords, dtype=float), metric)[0])


def distance_matrix(matrix: np.ndarray, metric: Metric) -> np.ndarray:
    n = matrix.shape[0]
    out = np.empty((n, n), dtype=float)
    for row in range(n):
        out[row] = row_distances(matrix, matrix[row], metric)
    return out


# ----------------------
# Datasets
# ----------------------


class Dataset:
    """Validated, ordered collection of points. Order is load order."""

    def __init__(self, points: Sequence[Point], dimension: int) -> None:
        self.points: Tuple[Point, ...] = tuple(points)
        self.dimension = dimension
        self._index = {p.id: row for row, p in enumerate(self.points)}

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, point_id: object) -> bool:
        return point_id in self._index

    def __repr__(self) -> str:
        return f"Dataset(n={len(self.points)}, d={self.dimension})"

    @cached_property
    def matrix(self) -> np.ndarray:
        if not self.points:
            return np.empty((0, self.dimension), dtype=float)
        return np.asarray([p.coords for p in self.points], dtype=float)

    @cached_property
    def ids(self) -> np.ndarray:
        return np.asarray([p.id for p in self.points], dtype=np.int64)

    def head(self, count: int) -> "Dataset":
        return Dataset(self.points[:count], self.dimension)

    def union(self, other: "Dataset") -> "Dataset":
        return validate_dataset([*self.points, *other.points])


def validate_dataset(points: Iterable[Point]) -> Dataset:
    checked: List[Point] = []
    seen: Set[int] = set()
    dimension: Optional[int] = None
    for p in points:
        if p.id in seen:
            raise DuplicateIdError(p.id)
        if dimension is None:
            dimension = p.dimension
        elif p.dimension != dimension:
            raise DimensionMismatchError(dimension, p.dimension, point_id=p.id)
        if p.dimension < 1 or not all(math.isfinite(c) for c in p.coords):
            raise NonFiniteCoordinateError(p.id)
        seen.add(p.id)
        checked.append(p)
    return Dataset(checked, dimension or 0)


def check_dimension(expected: Optional[int], p: Point) -> None:
    if expected and p.dimension != expected:
        raise DimensionMismatchError(expected, p.dimension, point_id=p.id)


# ----------------------
# Cluster model
# ----------------------


class PointMatrix:
    """Append-only coordinate buffer with a parallel integer tag per row."""

    def __init__(self, dimension: Optional[int] = None, capacity: int = 64) -> None:
        self.dimension = dimension
        self._capacity = capacity
        self._size = 0
        self._data: Optional[np.ndarray] = None
        self._ids = np.empty(capacity, dtype=np.int64)
        self._tags = np.empty(capacity, dtype=np.int64)
        self._rows: Dict[int, int] = {}

    def __len__(self) -> int:
        return self._size

    def _grow(self, needed: int) -> None:
        capacity = max(self._capacity * 2, needed)
        data = np.empty((capacity, self.dimension), dtype=float)
        data[: self._size] = self._data[: self._size]
        ids = np.empty(capacity, dtype=np.int64)
        ids[: self._size] = self._ids[: self._size]
        tags = np.empty(capacity, dtype=np.int64)
        tags[: self._size] = self._tags[: self._size]
        self._data, self._ids, self._tags, self._capacity = data, ids, tags, capacity

    def append(self, point_id: int, coords: Sequence[float], tag: int = 0) -> None:
        if self._data is None:
            self.dimension = self.dimension or len(coords)
            self._data = np.empty((self._capacity, self.dimension), dtype=float)
        if self._size == self._capacity:
            self._grow(self._size + 1)
        self._data[self._size] = coords
        self._ids[self._size] = point_id
        self._tags[self._size] = tag
        self._rows[point_id] = self._size
        self._size += 1

    @property
    def view(self) -> np.ndarray:
        if self._data is None:
            return np.empty((0, self.dimension or 0), dtype=float)
        return self._data[: self._size]

    @property
    def ids(self) -> np.ndarray:
        return self._ids[: self._size]

    @property
    def tags(self) -> np.ndarray:
        return self._tags[: self._size]

    def row(self, point_id: int) -> int:
        return self._rows[point_id]

    def copy(self) -> "PointMatrix":
        clone = PointMatrix(self.dimension, self._capacity)
        clone._size = self._size
        clone._data = None if self._data is None else self._data.copy()
        clone._ids = self._ids.copy()
        clone._tags = self._tags.copy()
        clone._rows = dict(self._rows)
        return clone


@dataclass
class Cluster:
    cluster_id: int
    members: Set[int] = field(default_factory=set)
    cores: Set[int] = field(default_factory=set)


class ClusterModel:
    """
    Clusters K, the outlier pool O and the point registry.

    Mutating methods are used by the batch and incremental engines while they
    build a model; callers outside the engine treat a model as a value and get
    updated copies back from `incremental`.
    """

    def __init__(self, params: Params, baseline_size: Optional[int] = None) -> None:
        self.params = params
        self.clusters: Dict[int, Cluster] = {}
        self.outliers: Set[int] = set()
        self.points: Dict[int, Point] = {}
        self.next_cluster_id = 1
        self.baseline_size = baseline_size or 0
        # Set once the pool is known to hold no point that is core within the pool.
        self.pool_settled = False
        self._membership: Dict[int, int] = {}
        self._registry = PointMatrix()
        self._cores = PointMatrix()

    # Construction ------------------------------------------------------------ #

    @classmethod
    def from_assignment(
        cls,
        params: Params,
        points: Iterable[Point],
        clusters: Iterable[Tuple[Iterable[int], Iterable[int]]] = (),
        outliers: Iterable[int] = (),
        cluster_ids: Optional[Sequence[int]] = None,
        next_cluster_id: Optional[int] = None,
        baseline_size: Optional[int] = None,
    ) -> "ClusterModel":
        """
        Build a model from explicit memberships, e.g. a hand-made starting
        clustering or a loaded snapshot. Raises PartitionError on any breach.
        """
        dataset = validate_dataset(points)
        model = cls(params, baseline_size=len(dataset) if baseline_size is None else baseline_size)
        for p in dataset:
            model.register(p)
        cluster_list = [(list(m), list(c)) for m, c in clusters]
        ids = list(cluster_ids) if cluster_ids is not None else list(range(1, len(cluster_list) + 1))
        if len(ids) != len(cluster_list):
            raise PartitionError("cluster id list does not match the cluster list")
        for cluster_id, (members, cores) in zip(ids, cluster_list):
            model.add_cluster(members, cores, cluster_id=cluster_id)
        for point_id in outliers:
            model.add_outlier(point_id)
        if next_cluster_id is not None:
            if next_cluster_id <= max(model.clusters, default=0):
                raise PartitionError(f"next_cluster_id {next_cluster_id} does not exceed every cluster id")
            model.next_cluster_id = next_cluster_id
        model.check_partition()
        return model

    # Mutation ---------------------------------------------------------------- #

    def register(self, p: Point) -> None:
        if p.id in self.points:
            raise DuplicateIdError(p.id, "already registered")
        check_dimension(self.dimension, p)
        self.points[p.id] = p
        self._registry.append(p.id, p.coords)

    def _claim(self, point_id: int, cluster_id: int) -> None:
        if point_id not in self.points:
            raise PartitionError(f"point {point_id} is not registered")
        if point_id in self._membership or point_id in self.outliers:
            raise PartitionError(f"point {point_id} already has a home")
        self._membership[point_id] = cluster_id

    def add_cluster(
        self,
        members: Iterable[int],
        cores: Iterable[int],
        cluster_id: Optional[int] = None,
    ) -> int:
        cluster_id = self.next_cluster_id if cluster_id is None else cluster_id
        if cluster_id < 1 or cluster_id in self.clusters:
            raise PartitionError(f"cluster id {cluster_id} is invalid or already used")
        cluster = Cluster(cluster_id)
        for point_id in members:
            self._claim(point_id, cluster_id)
            cluster.members.add(point_id)
        if not cluster.members:
            raise PartitionError(f"cluster {cluster_id} has no members")
        self.clusters[cluster_id] = cluster
        for point_id in cores:
            if point_id not in cluster.members:
                raise PartitionError(f"core {point_id} is not a member of cluster {cluster_id}")
            self._mark_core(cluster, point_id)
        self.next_cluster_id = max(self.next_cluster_id, cluster_id + 1)
        return cluster_id

    def _mark_core(self, cluster: Cluster, point_id: int) -> None:
        if point_id in cluster.cores:
            return
        cluster.cores.add(point_id)
        self._cores.append(point_id, self.points[point_id].coords, tag=cluster.cluster_id)

    def add_member(self, cluster_id: int, point_id: int, core: bool = False) -> None:
        cluster = self.clusters[cluster_id]
        self._claim(point_id, cluster_id)
        cluster.members.add(point_id)
        if core:
            self._mark_core(cluster, point_id)

    def add_outlier(self, point_id: int) -> None:
        if point_id not in self.points:
            raise PartitionError(f"point {point_id} is not registered")
        if point_id in self._membership or point_id in self.outliers:
            raise PartitionError(f"point {point_id} already has a home")
        self.outliers.add(point_id)

    def release_outliers(self, point_ids: Iterable[int]) -> None:
        for point_id in point_ids:
            self.outliers.remove(point_id)

    def with_params(self, **changes) -> "ClusterModel":
        clone = self.copy()
        clone.params = self.params.model_copy(update=changes)
        clone.pool_settled = False
        return clone

    def copy(self) -> "ClusterModel":
        clone = ClusterModel(self.params, baseline_size=self.baseline_size)
        clone.clusters = {
            cid: Cluster(cid, set(c.members), set(c.cores)) for cid, c in self.clusters.items()
        }
        clone.outliers = set(self.outliers)
        clone.points = dict(self.points)
        clone.next_cluster_id = self.next_cluster_id
        clone.pool_settled = self.pool_settled
        clone._membership = dict(self._membership)
        clone._registry = self._registry.copy()
        clone._cores = self._cores.copy()
        return clone

    # Queries ----------------------------------------------------------------- #

    @property
    def dimension(self) -> Optional[int]:
        return self._registry.dimension

    @property
    def registry(self) -> PointMatrix:
        return self._registry

    @property
    def core_matrix(self) -> PointMatrix:
        return self._cores

    def cluster_of(self, point_id: int) -> Optional[int]:
        return self._membership.get(point_id)

    def neighborhood_size(self, p: Point) -> int:
        """|N_eps(p)| over the registry, p included when registered."""
        if not len(self._registry):
            return 0
        dists = row_distances(self._registry.view, np.asarray(p.coords, dtype=float), self.params.metric)
        return int(np.count_nonzero(dists <= self.params.eps))

    def registry_order(self) -> List[Point]:
        return [self.points[int(i)] for i in self._registry.ids]

    def labels(self) -> Dict[int, Optional[int]]:
        return {point_id: self._membership.get(point_id) for point_id in self.points}

    def summary(self) -> ModelSummary:
        return ModelSummary(clusters=len(self.clusters), outliers=len(self.outliers), points=len(self.points))

    def check_partition(self) -> None:
        homes: Dict[int, str] = {}
        for cid, cluster in self.clusters.items():
            if cid < 1 or cluster.cluster_id != cid:
                raise PartitionError(f"cluster key {cid} does not match its id {cluster.cluster_id}")
            if cid >= self.next_cluster_id:
                raise PartitionError(f"cluster id {cid} is not below next_cluster_id {self.next_cluster_id}")
            if not cluster.members:
                raise PartitionError(f"cluster {cid} has no members")
            if not cluster.cores <= cluster.members:
                raise PartitionError(f"cluster {cid} has cores outside its members")
            for point_id in cluster.members:
                if point_id in homes:
                    raise PartitionError(f"point {point_id} appears in {homes[point_id]} and cluster {cid}")
                homes[point_id] = f"cluster {cid}"
        for point_id in self.outliers:
            if point_id in homes:
                raise PartitionError(f"point {point_id} appears in {homes[point_id]} and the outlier pool")
            homes[point_id] = "the outlier pool"
        for point_id in homes:
            if point_id not in self.points:
                raise PartitionError(f"point {point_id} has a home but is not registered")
        for point_id in self.points:
            if point_id not in homes:
                raise PartitionError(f"point {point_id} has no home")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClusterModel):
            return NotImplemented
        return (
            self.params == other.params
            and self.points == other.points
            and self.outliers == other.outliers
            and self.next_cluster_id == other.next_cluster_id
            and self.baseline_size == other.baseline_size
            and {cid: (c.members, c.cores) for cid, c in self.clusters.items()}
            == {cid: (c.members, c.cores) for cid, c in other.clusters.items()}
        )

    def __repr__(self) -> str:
        s = self.summary()
        return f"ClusterModel(clusters={s.clusters}, outliers={s.outliers}, points={s.points})"
