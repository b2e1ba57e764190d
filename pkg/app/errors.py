# app/errors.py

"""
Domain errors for the clustering engine.
Every error the engine raises on bad input derives from ClusteringError so the
CLI can turn it into a one-line diagnostic.
"""

from __future__ import annotations

from typing import Optional


class ClusteringError(Exception):
  """Base class for every engine error."""


class InvalidInputError(ClusteringError, ValueError):
  pass


class DuplicateIdError(InvalidInputError):
  def __init__(self, point_id: int, detail: str = "") -> None:
    self.point_id = point_id
    message = f"duplicate point id {point_id}"
    if detail:
      message = f"{message} ({detail})"
    super().__init__(message)


class DimensionMismatchError(InvalidInputError):
  def __init__(self, expected: int, actual: int, point_id: Optional[int] = None, where: str = "") -> None:
    self.expected = expected
    self.actual = actual
    self.point_id = point_id
    subject = f"point {point_id}" if point_id is not None else "point"
    prefix = f"{where}: " if where else ""
    super().__init__(f"{prefix}{subject} has dimension {actual}, expected {expected}")


class NonFiniteCoordinateError(InvalidInputError):
  def __init__(self, point_id: int) -> None:
    self.point_id = point_id
    super().__init__(f"point {point_id} has a non-finite coordinate")


class PartitionError(ClusteringError):
  """A model breaks the exactly-one-home rule or a cluster invariant."""


class UndefinedBaselineError(InvalidInputError):
  pass


class CsvFormatError(InvalidInputError):
  def __init__(self, line: int, detail: str) -> None:
    self.line = line
    super().__init__(f"line {line}: {detail}")


class SnapshotError(ClusteringError):
  pass


class BatchInsertError(ClusteringError):
  """
  Raised by batch_insert when a point is rejected.
  Carries the model with every earlier insertion applied and their outcomes.
  """

  def __init__(self, point_id: int, model, outcomes: list, cause: ClusteringError) -> None:
    self.point_id = point_id
    self.model = model
    self.outcomes = outcomes
    self.cause = cause
    super().__init__(f"insertion stopped at point {point_id} after {len(outcomes)} point(s): {cause}")
