# tests/conftest.py

from pathlib import Path

import pytest

from app.clustering.model import ClusterModel, validate_dataset
from app.ingest import load_csv
from app.schemas import Metric, OutlierRule, Params, Point

FIXTURES = Path(__file__).parent / "fixtures"

# 1-D example: id -> value
EXAMPLE_ONE_VALUES = {1: 12, 2: 15, 3: 22, 4: 85, 5: 82, 6: 73, 7: 8, 8: 10, 9: 17, 10: 48, 11: 96, 12: 152}
EXAMPLE_ONE_PARAMS = Params(eps=30, min_pts=5, metric=Metric.MANHATTAN)

EXAMPLE_TWO_COORDS = {
    1: (5, 2), 2: (12, 3), 3: (22, 82), 4: (125, 110),
    5: (32, 42), 6: (12, 28), 7: (56, 48), 8: (68, 72),
}
EXAMPLE_TWO_ADDITIONS = [
    Point(id=9, coords=(132, 122)),
    Point(id=10, coords=(38, 58)),
    Point(id=11, coords=(162, 135)),
    Point(id=12, coords=(118, 126)),
]
EXAMPLE_TWO_PARAMS = Params(eps=25, min_pts=4, metric=Metric.MANHATTAN, outlier_rule=OutlierRule.COUNT_ONLY)


def point(point_id, *coords):
    return Point(id=point_id, coords=tuple(float(c) for c in coords))


def assert_partition(model: ClusterModel) -> None:
    model.check_partition()


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def example_one_dataset():
    return validate_dataset(point(i, v) for i, v in EXAMPLE_ONE_VALUES.items())


@pytest.fixture
def example_one_model():
    """Cluster1 around core 15, Cluster2 around core 82 (size 5), 152 pooled."""
    points = [point(i, v) for i, v in EXAMPLE_ONE_VALUES.items()]
    return ClusterModel.from_assignment(
        EXAMPLE_ONE_PARAMS,
        points,
        clusters=[
            ([7, 8, 1, 2, 9, 3], [2]),
            ([10, 6, 5, 4, 11], [5]),
        ],
        outliers=[12],
    )


@pytest.fixture
def example_two_dataset(fixtures_dir):
    return load_csv(fixtures_dir / "example2.csv")


@pytest.fixture
def example_two_model():
    """Cluster1 around (12,3), Cluster2 around (32,42), (125,110) pooled."""
    points = [point(i, *c) for i, c in EXAMPLE_TWO_COORDS.items()]
    return ClusterModel.from_assignment(
        EXAMPLE_TWO_PARAMS,
        points,
        clusters=[
            ([1, 2, 6], [2]),
            ([3, 5, 7, 8], [5]),
        ],
        outliers=[4],
    )


@pytest.fixture
def example_two_additions():
    return list(EXAMPLE_TWO_ADDITIONS)
