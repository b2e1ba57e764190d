# app/bench/agreement.py

from __future__ import annotations

from typing import List, Mapping, Optional, Sequence

from sklearn.metrics import rand_score

from app.errors import InvalidInputError

Labels = Mapping[int, Optional[int]]


def _encode(labels: Labels, ids: Sequence[int]) -> List[int]:
    # outliers become singleton groups with labels no cluster can use
    encoded = []
    for position, point_id in enumerate(ids):
        group = labels[point_id]
        encoded.append(-(position + 1) if group is None else int(group))
    return encoded


def rand_index(a: Labels, b: Labels, ignore_noise: bool = False) -> float:
    """
    Fraction of unordered id pairs on which two partitions agree.
    Partitions map point id -> cluster id, None for an outlier.
    """
    if set(a) != set(b):
        missing = sorted(set(a) ^ set(b))[:5]
        raise InvalidInputError(f"partitions cover different ids (e.g. {missing})")
    ids = sorted(a)
    if ignore_noise:
        ids = [i for i in ids if a[i] is not None and b[i] is not None]
    if len(ids) < 2:
        return 1.0
    return float(rand_score(_encode(a, ids), _encode(b, ids)))


def partition_labels(groups: Sequence[Sequence[int]], outliers: Sequence[int] = ()) -> dict:
    """Labels for an explicit list of groups; handy for tests and ad-hoc checks."""
    labels = {}
    for group_id, group in enumerate(groups, start=1):
        for point_id in group:
            labels[point_id] = group_id
    for point_id in outliers:
        labels[point_id] = None
    return labels
