# app/bench/generators.py

"""Seeded synthetic data for the benchmark and the agreement checks."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from app.clustering.model import ClusterModel, Dataset, validate_dataset
from app.errors import DimensionMismatchError, InvalidInputError
from app.schemas import Point


def _dataset_from_matrix(matrix: np.ndarray, id_start: int) -> Dataset:
    if not len(matrix):
        return Dataset([], matrix.shape[1])
    return validate_dataset(
        Point(id=id_start + row, coords=tuple(float(c) for c in coords)) for row, coords in enumerate(matrix)
    )


def blob_dataset(
    centers: Sequence[Sequence[float]],
    per_blob: int,
    spread: float,
    seed: int = 0,
    truncate: Optional[float] = None,
    noise: int = 0,
    id_start: int = 0,
) -> Dataset:
    """
    Gaussian blobs around `centers`, blob by blob, then `noise` uniform points
    over the padded bounding box. With `truncate`, samples farther than
    truncate * spread (euclidean) from their center are redrawn.
    """
    rng = np.random.default_rng(seed)
    centers_arr = np.asarray(centers, dtype=float)
    if centers_arr.ndim != 2 or not len(centers_arr):
        raise InvalidInputError("centers must be a non-empty list of coordinate vectors")
    dimension = centers_arr.shape[1]

    chunks = []
    for center in centers_arr:
        samples = rng.normal(0.0, spread, size=(per_blob, dimension))
        if truncate is not None:
            limit = truncate * spread
            outside = np.linalg.norm(samples, axis=1) > limit
            while outside.any():
                samples[outside] = rng.normal(0.0, spread, size=(int(outside.sum()), dimension))
                outside = np.linalg.norm(samples, axis=1) > limit
        chunks.append(center + samples)
    if noise:
        low = centers_arr.min(axis=0) - 3 * spread
        high = centers_arr.max(axis=0) + 3 * spread
        chunks.append(rng.uniform(low, high, size=(noise, dimension)))
    return _dataset_from_matrix(np.vstack(chunks), id_start)


def uniform_dataset(n: int, dimension: int, low: float, high: float, seed: int = 0, id_start: int = 0) -> Dataset:
    rng = np.random.default_rng(seed)
    return _dataset_from_matrix(rng.uniform(low, high, size=(n, dimension)), id_start)


def near_core_additions(model: ClusterModel, count: int, seed: int = 0, id_start: Optional[int] = None) -> Dataset:
    """
    Points within eps/2 of a randomly chosen core object, under either metric:
    each axis is offset by at most eps / (2 d).
    """
    cores = model.core_matrix
    if not len(cores):
        raise InvalidInputError("model has no core objects to sample around")
    rng = np.random.default_rng(seed)
    dimension = cores.view.shape[1]
    bound = model.params.eps / (2 * dimension)
    picks = rng.integers(0, len(cores), size=count)
    offsets = rng.uniform(-bound, bound, size=(count, dimension))
    start = (max(model.points) + 1) if id_start is None else id_start
    return _dataset_from_matrix(cores.view[picks] + offsets, start)


class AdditionStream(BaseModel):
    """
    The sweep's addition generator: Gaussian samples around random core
    objects of the stored model, plus a uniform-noise fraction over the base's
    bounding box so both the assignment and the pooling paths get exercised.
    """

    model_config = ConfigDict(frozen=True)

    seed: int = 0
    noise_fraction: float = Field(default=0.10, ge=0.0, le=1.0)
    spread: Optional[float] = Field(default=None, gt=0.0)
    dimension: Optional[int] = Field(default=None, ge=1)

    def draw(self, model: ClusterModel, base: Dataset, count: int) -> Dataset:
        if self.dimension is not None and self.dimension != base.dimension:
            raise DimensionMismatchError(base.dimension, self.dimension, where="addition stream")
        if not len(base):
            raise InvalidInputError("cannot draw additions for an empty base dataset")

        rng = np.random.default_rng(self.seed)
        dimension = base.dimension
        spread = self.spread if self.spread is not None else max(model.params.eps / 2, 1e-9)
        low = base.matrix.min(axis=0)
        high = base.matrix.max(axis=0)
        cores = model.core_matrix.view

        is_noise = rng.random(count) < self.noise_fraction
        if not len(cores):
            is_noise[:] = True
        out = np.empty((count, dimension), dtype=float)
        n_noise = int(is_noise.sum())
        out[is_noise] = rng.uniform(low, high, size=(n_noise, dimension))
        n_blob = count - n_noise
        if n_blob:
            picks = rng.integers(0, len(cores), size=n_blob)
            out[~is_noise] = cores[picks] + rng.normal(0.0, spread, size=(n_blob, dimension))
        return _dataset_from_matrix(out, int(base.ids.max()) + 1)
