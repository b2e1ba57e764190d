from __future__ import annotations

import math
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator


# ----------------------
# Points & parameters
# ----------------------


# point and cluster ids live in int64 arrays inside the engine
MAX_ID = 2**63 - 1


class Metric(str, Enum):
  MANHATTAN = "manhattan"
  EUCLIDEAN = "euclidean"


class OutlierRule(str, Enum):
  COUNT_ONLY = "count_only"
  DENSITY = "density"


class Point(BaseModel):
  """An identified coordinate vector. Ids are caller-assigned."""

  model_config = ConfigDict(frozen=True)

  id: int = Field(ge=0, le=MAX_ID)
  coords: Tuple[float, ...]

  @field_validator("coords")
  @classmethod
  def _finite_coords(cls, value: Tuple[float, ...], info: ValidationInfo) -> Tuple[float, ...]:
    point_id = info.data.get("id")
    if not value:
      raise ValueError(f"point {point_id} has no coordinates")
    if not all(math.isfinite(c) for c in value):
      raise ValueError(f"point {point_id} has a non-finite coordinate")
    return value

  @property
  def dimension(self) -> int:
    return len(self.coords)


class Params(BaseModel):
  model_config = ConfigDict(frozen=True, extra="forbid")

  eps: float = Field(ge=0.0, allow_inf_nan=False)
  min_pts: int = Field(ge=1)
  metric: Metric = Metric.MANHATTAN
  outlier_rule: OutlierRule = OutlierRule.COUNT_ONLY


class ModelSummary(BaseModel):
  clusters: int
  outliers: int
  points: int


# ----------------------
# Rerun policy
# ----------------------


class Decision(str, Enum):
  USE_INCREMENTAL = "use_incremental"
  RERUN_FULL = "rerun_full"


class DeltaStats(BaseModel):
  model_config = ConfigDict(frozen=True)

  old_size: int = Field(ge=0)
  added: int = Field(ge=0)
  delta_percent: float


class RerunPolicy(BaseModel):
  model_config = ConfigDict(frozen=True)

  threshold_x: float = Field(gt=0.0, allow_inf_nan=False)


# ----------------------
# Benchmark
# ----------------------


class TrialResult(BaseModel):
  delta_fraction: float = Field(ge=0.0)
  added: int = Field(ge=0)
  t1: float = Field(ge=0.0)
  t2: float = Field(ge=0.0)
  speedup: float
  agreement: float = Field(ge=0.0, le=1.0)

  @property
  def delta_percent(self) -> float:
    return self.delta_fraction * 100.0


class BenchReport(BaseModel):
  trials: List[TrialResult]
  agreement_floor: float = Field(ge=0.0, le=1.0)
  crossover_x: Optional[float] = None
  recommended_x: Optional[float] = None


# ----------------------
# Model snapshot (file persistence)
# ----------------------


SNAPSHOT_FORMAT_VERSION = 1


class ClusterRecord(BaseModel):
  model_config = ConfigDict(extra="forbid")

  cluster_id: int = Field(ge=1, le=MAX_ID)
  members: List[int]
  cores: List[int]


class PointRecord(BaseModel):
  model_config = ConfigDict(extra="forbid")

  id: int = Field(ge=0, le=MAX_ID)
  coords: List[float]


class ModelSnapshot(BaseModel):
  """On-disk form of a ClusterModel. Field order is the file's key order."""

  model_config = ConfigDict(extra="forbid")

  format_version: int
  params: Params
  next_cluster_id: int = Field(ge=1, le=MAX_ID)
  baseline_size: int = Field(ge=0)
  clusters: List[ClusterRecord]
  outliers: List[int]
  points: List[PointRecord]
