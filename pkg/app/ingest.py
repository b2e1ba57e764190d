# app/ingest.py

from __future__ import annotations

import csv
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import ValidationError

from .clustering.model import Dataset, validate_dataset
from .errors import CsvFormatError, DimensionMismatchError, DuplicateIdError, InvalidInputError
from .schemas import Point


def _first_error(exc: ValidationError) -> str:
  err = exc.errors()[0]
  return str(err.get("msg", exc))


def parse_point(cells: List[str], line: int) -> Point:
  if len(cells) < 2:
    raise CsvFormatError(line, "expected id followed by at least one coordinate")
  raw_id = cells[0].strip()
  try:
    point_id = int(raw_id)
  except ValueError:
    raise CsvFormatError(line, f"id {raw_id!r} is not an integer")
  coords = []
  for raw in cells[1:]:
    try:
      coords.append(float(raw.strip()))
    except ValueError:
      raise CsvFormatError(line, f"coordinate {raw.strip()!r} is not a number")
  try:
    return Point(id=point_id, coords=tuple(coords))
  except ValidationError as exc:
    raise CsvFormatError(line, _first_error(exc))


def load_csv(path: Path) -> Dataset:
  """
  Read `id,c1,...,cd` rows. Blank lines and lines starting with '#' are
  skipped; LF and CRLF both work.
  """
  points: List[Point] = []
  lines: Dict[int, int] = {}
  dimension: Optional[int] = None

  path = Path(path)
  try:
    fh = path.open("r", encoding="utf-8-sig", newline="")
  except OSError as exc:
    raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from exc

  with fh:
    reader = csv.reader(fh)
    try:
      for cells in reader:
        line = reader.line_num
        if not cells or not "".join(cells).strip():
          continue
        if cells[0].lstrip().startswith("#"):
          continue
        p = parse_point(cells, line)
        if p.id in lines:
          raise DuplicateIdError(p.id, f"line {line}, first seen on line {lines[p.id]}")
        if dimension is None:
          dimension = p.dimension
        elif p.dimension != dimension:
          raise DimensionMismatchError(dimension, p.dimension, point_id=p.id, where=f"line {line}")
        lines[p.id] = line
        points.append(p)
    except UnicodeDecodeError as exc:
      raise InvalidInputError(f"{path} is not valid UTF-8 text") from exc

  return validate_dataset(points)
