import numpy as np
import pytest

from app.bench.generators import uniform_dataset
from app.clustering.batch import dbscan
from app.clustering.incremental import OutcomeKind, insert
from app.schemas import Metric, OutlierRule, Params, Point

EPISODES = 50
INSERTS_PER_EPISODE = 200


@pytest.mark.parametrize("episode", range(EPISODES))
def test_partition_holds_after_every_insert(episode):
    rng = np.random.default_rng(1000 + episode)
    dimension = int(rng.integers(1, 4))
    params = Params(
        eps=float(rng.uniform(1.0, 6.0)),
        min_pts=int(rng.integers(2, 6)),
        metric=Metric.MANHATTAN if episode % 2 else Metric.EUCLIDEAN,
        outlier_rule=OutlierRule.COUNT_ONLY if episode % 4 < 2 else OutlierRule.DENSITY,
    )
    base = uniform_dataset(30, dimension, 0.0, 30.0, seed=episode)
    model = dbscan(base, params)
    model.check_partition()

    next_id = 30
    for _ in range(INSERTS_PER_EPISODE):
        coords = tuple(float(c) for c in rng.uniform(0.0, 30.0, size=dimension))
        if rng.random() < 0.5:
            coords = tuple(float(round(c)) for c in coords)
        p = Point(id=next_id, coords=coords)
        next_id += 1

        updated, outcome = insert(model, p)
        updated.check_partition()
        assert set(updated.points) == set(model.points) | {p.id}
        for cid, cluster in model.clusters.items():
            assert cluster.members <= updated.clusters[cid].members
        nearest = outcome.nearest
        if outcome.kind == OutcomeKind.ASSIGNED:
            assert outcome.distance <= params.eps
            assert updated.cluster_of(p.id) == outcome.cluster_id
        elif outcome.kind == OutcomeKind.POOLED:
            assert p.id in updated.outliers
            assert (
                nearest is None
                or nearest.distance > params.eps
                or len(model.clusters[nearest.cluster_id].members) < params.min_pts
            )
            if params.outlier_rule == OutlierRule.COUNT_ONLY:
                assert len(updated.outliers) < params.min_pts
        else:
            assert updated.cluster_of(p.id) == outcome.cluster_id
            if params.outlier_rule == OutlierRule.COUNT_ONLY:
                assert not updated.outliers
        assert all(cid < updated.next_cluster_id for cid in updated.clusters)
        model = updated
