import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from app.clustering.model import ClusterModel
from app.errors import PartitionError, SnapshotError
from app.schemas import Metric, OutlierRule, Params, Point
from app.store import dumps_model, load_model, loads_model, save_model

from tests.settings import ROUNDTRIP_SETTINGS

coordinate = st.floats(min_value=-1e9, max_value=1e9, allow_nan=False, allow_infinity=False)


@st.composite
def cluster_models(draw):
    dimension = draw(st.integers(min_value=1, max_value=4))
    ids = draw(st.lists(st.integers(min_value=0, max_value=10_000), min_size=0, max_size=40, unique=True))
    points = [
        Point(id=i, coords=tuple(draw(st.lists(coordinate, min_size=dimension, max_size=dimension))))
        for i in ids
    ]
    # group 0 is the outlier pool
    groups = [draw(st.integers(min_value=0, max_value=5)) for _ in ids]
    used = sorted({g for g in groups if g})
    cluster_ids = draw(st.lists(st.integers(min_value=1, max_value=50), min_size=len(used), max_size=len(used), unique=True))
    clusters = []
    for g in used:
        members = [i for i, grp in zip(ids, groups) if grp == g]
        cores = [m for m in members if draw(st.booleans())]
        clusters.append((members, cores))
    params = Params(
        eps=draw(st.floats(min_value=0.0, max_value=1e3, allow_nan=False, allow_infinity=False)),
        min_pts=draw(st.integers(min_value=1, max_value=20)),
        metric=draw(st.sampled_from(list(Metric))),
        outlier_rule=draw(st.sampled_from(list(OutlierRule))),
    )
    next_id = max(cluster_ids, default=0) + draw(st.integers(min_value=1, max_value=5))
    return ClusterModel.from_assignment(
        params,
        points,
        clusters=clusters,
        outliers=[i for i, grp in zip(ids, groups) if grp == 0],
        cluster_ids=cluster_ids,
        next_cluster_id=next_id,
        baseline_size=draw(st.integers(min_value=0, max_value=100)),
    )


@given(cluster_models())
@ROUNDTRIP_SETTINGS
def test_snapshot_round_trip(model):
    text = dumps_model(model)
    restored = loads_model(text)
    assert restored == model
    assert [p.id for p in restored.registry_order()] == [p.id for p in model.registry_order()]
    assert dumps_model(restored) == text


def test_snapshot_layout(example_two_model):
    document = json.loads(dumps_model(example_two_model))
    assert list(document) == [
        "format_version", "params", "next_cluster_id", "baseline_size", "clusters", "outliers", "points",
    ]
    assert document["params"] == {"eps": 25.0, "min_pts": 4, "metric": "manhattan", "outlier_rule": "count_only"}
    assert document["clusters"][1] == {"cluster_id": 2, "members": [3, 5, 7, 8], "cores": [5]}
    assert document["outliers"] == [4]


def test_save_and_load(tmp_path, example_one_model):
    path = tmp_path / "model.json"
    save_model(example_one_model, path)
    assert load_model(path) == example_one_model
    assert [p.name for p in tmp_path.iterdir()] == ["model.json"]


def test_save_refuses_a_broken_model(tmp_path, example_one_model):
    broken = example_one_model.copy()
    broken.outliers.add(1)
    path = tmp_path / "model.json"
    with pytest.raises(PartitionError):
        save_model(broken, path)
    assert not path.exists()


def test_load_missing_file(tmp_path):
    with pytest.raises(SnapshotError, match="cannot read"):
        load_model(tmp_path / "absent.json")


def _document(model):
    return json.loads(dumps_model(model))


def test_missing_outliers_field_is_rejected(example_one_model):
    document = _document(example_one_model)
    del document["outliers"]
    with pytest.raises(SnapshotError, match="outliers"):
        loads_model(json.dumps(document))


def test_point_in_two_clusters_is_a_partition_violation(example_one_model):
    document = _document(example_one_model)
    document["clusters"][1]["members"].append(1)
    with pytest.raises(SnapshotError, match="partition violation"):
        loads_model(json.dumps(document))


def test_homeless_point_is_a_partition_violation(example_one_model):
    document = _document(example_one_model)
    document["outliers"] = []
    with pytest.raises(SnapshotError, match="partition violation"):
        loads_model(json.dumps(document))


def test_unknown_format_version(example_one_model):
    document = _document(example_one_model)
    document["format_version"] = 99
    with pytest.raises(SnapshotError, match="unsupported format_version 99"):
        loads_model(json.dumps(document))


def test_unknown_field_is_rejected(example_one_model):
    document = _document(example_one_model)
    document["centroids"] = []
    with pytest.raises(SnapshotError, match="rejected snapshot"):
        loads_model(json.dumps(document))


def test_non_finite_coordinate_is_rejected(example_one_model):
    document = _document(example_one_model)
    document["points"][0]["coords"] = [float("nan")]
    with pytest.raises(SnapshotError):
        loads_model(json.dumps(document))


def test_garbage_is_rejected():
    with pytest.raises(SnapshotError, match="rejected snapshot"):
        loads_model("not json")


def test_save_into_missing_directory(tmp_path, example_one_model):
    with pytest.raises(SnapshotError, match="cannot write"):
        save_model(example_one_model, tmp_path / "nodir" / "model.json")


def test_load_invalid_utf8(tmp_path):
    path = tmp_path / "model.json"
    path.write_bytes(b'{"format_version": \xff\xfe}')
    with pytest.raises(SnapshotError, match="not valid UTF-8"):
        load_model(path)


def test_point_id_beyond_int64_is_rejected(example_one_model):
    document = _document(example_one_model)
    document["points"][0]["id"] = 2**63
    with pytest.raises(SnapshotError, match="rejected snapshot: points.0.id"):
        loads_model(json.dumps(document))
