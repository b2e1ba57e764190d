# app/store.py

"""
Model persistence: the stored clustering result that incremental sessions
start from. One JSON document per model, canonical ordering, written to a
temporary file and renamed into place.
"""

from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path

from pydantic import ValidationError

from .clustering.model import ClusterModel
from .errors import ClusteringError, PartitionError, SnapshotError
from .schemas import SNAPSHOT_FORMAT_VERSION, ClusterRecord, ModelSnapshot, Point, PointRecord

logger = logging.getLogger("incdbscan.store")


def snapshot_of(model: ClusterModel) -> ModelSnapshot:
  clusters = [
    ClusterRecord(
      cluster_id=cid,
      members=sorted(model.clusters[cid].members),
      cores=sorted(model.clusters[cid].cores),
    )
    for cid in sorted(model.clusters)
  ]
  # registry order is kept: it fixes the order of any later pool or rerun pass
  points = [PointRecord(id=p.id, coords=list(p.coords)) for p in model.registry_order()]
  return ModelSnapshot(
    format_version=SNAPSHOT_FORMAT_VERSION,
    params=model.params,
    next_cluster_id=model.next_cluster_id,
    baseline_size=model.baseline_size,
    clusters=clusters,
    outliers=sorted(model.outliers),
    points=points,
  )


def model_from_snapshot(snapshot: ModelSnapshot) -> ClusterModel:
  if snapshot.format_version != SNAPSHOT_FORMAT_VERSION:
    raise SnapshotError(
      f"unsupported format_version {snapshot.format_version} (expected {SNAPSHOT_FORMAT_VERSION})"
    )
  try:
    return ClusterModel.from_assignment(
      snapshot.params,
      (Point(id=r.id, coords=tuple(r.coords)) for r in snapshot.points),
      clusters=[(c.members, c.cores) for c in snapshot.clusters],
      outliers=snapshot.outliers,
      cluster_ids=[c.cluster_id for c in snapshot.clusters],
      next_cluster_id=snapshot.next_cluster_id,
      baseline_size=snapshot.baseline_size,
    )
  except PartitionError as exc:
    raise SnapshotError(f"partition violation: {exc}") from exc
  except ValidationError as exc:
    raise SnapshotError(f"invalid point record: {exc.errors()[0].get('msg')}") from exc
  except ClusteringError as exc:
    raise SnapshotError(f"invalid point table: {exc}") from exc


def dumps_model(model: ClusterModel) -> str:
  model.check_partition()
  return snapshot_of(model).model_dump_json(indent=2) + "\n"


def loads_model(text: str) -> ClusterModel:
  try:
    snapshot = ModelSnapshot.model_validate_json(text)
  except ValidationError as exc:
    err = exc.errors()[0]
    where = ".".join(str(part) for part in err.get("loc", ())) or "document"
    raise SnapshotError(f"rejected snapshot: {where}: {err.get('msg')}") from exc
  return model_from_snapshot(snapshot)


def save_model(model: ClusterModel, path: Path) -> None:
  path = Path(path)
  payload = dumps_model(model)
  directory = path.parent if str(path.parent) else Path(".")
  try:
    fd, tmp_name = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
  except OSError as exc:
    raise SnapshotError(f"cannot write {path}: {exc.strerror}") from exc
  try:
    with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
      fh.write(payload)
      fh.flush()
      os.fsync(fh.fileno())
    os.replace(tmp_name, path)
  except OSError as exc:
    Path(tmp_name).unlink(missing_ok=True)
    raise SnapshotError(f"cannot write {path}: {exc.strerror}") from exc
  except BaseException:
    Path(tmp_name).unlink(missing_ok=True)
    raise
  logger.info("saved model with %d points to %s", len(model.points), path)


def load_model(path: Path) -> ClusterModel:
  path = Path(path)
  try:
    text = path.read_text(encoding="utf-8")
  except OSError as exc:
    raise SnapshotError(f"cannot read {path}: {exc.strerror}") from exc
  except UnicodeDecodeError as exc:
    raise SnapshotError(f"cannot read {path}: not valid UTF-8 text") from exc
  model = loads_model(text)
  logger.info("loaded model with %d points from %s", len(model.points), path)
  return model
