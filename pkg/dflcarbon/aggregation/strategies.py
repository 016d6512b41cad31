"""
Aggregation strategies a node applies to its own and its neighbors' models.

All strategies visit candidates in ascending node id so results are
bit-reproducible regardless of arrival order.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, List, NamedTuple, Optional, Sequence

import numpy as np

from dflcarbon.core.exceptions import (
    AggregationError,
    EmptyInput,
    ShapeMismatch,
    TooFewUpdates,
)
from dflcarbon.learning.mlp import ModelParams


class AggregationKind(Enum):
    FEDAVG = "fedavg"
    KRUM = "krum"
    GREEN_SA = "green_sa"


@dataclass(frozen=True)
class AggregationSpec:
    """Strategy choice; `f` for Krum, `c_thresh` or `percentile` for GreenSA."""
    kind: AggregationKind
    f: int = 0
    c_thresh: Optional[float] = None
    percentile: Optional[float] = None

    def __str__(self) -> str:
        if self.kind is AggregationKind.KRUM:
            return f"krum:f={self.f}"
        if self.kind is AggregationKind.GREEN_SA:
            if self.percentile is not None:
                return f"green_sa:p{self.percentile:g}"
            return f"green_sa:{self.c_thresh:g}g"
        return self.kind.value


@dataclass(frozen=True)
class NeighborUpdate:
    """A model offered for aggregation together with its sender's report."""
    sender: int
    model: ModelParams
    sample_count: int
    reported_emissions: float = 0.0


class SelectiveResult(NamedTuple):
    model: ModelParams
    selected: FrozenSet[int]


def _ordered(own: NeighborUpdate, received: Sequence[NeighborUpdate]) -> List[NeighborUpdate]:
    candidates = sorted([own, *received], key=lambda u: u.sender)
    shapes = own.model.layer_shapes
    for update in candidates:
        if update.model.layer_shapes != shapes:
            raise ShapeMismatch(
                f"Node {update.sender} sent shapes {update.model.layer_shapes}, expected {shapes}",
                error_code="A001")
    return candidates


def fedavg(own: NeighborUpdate, received: Sequence[NeighborUpdate]) -> ModelParams:
    """Sample-count weighted mean of own and received models.

    Raises:
        ShapeMismatch: If any model has a different architecture
    """
    candidates = _ordered(own, received)
    if len(candidates) == 1:
        return own.model
    total = float(sum(u.sample_count for u in candidates))
    acc = np.zeros(own.model.size, dtype=np.float64)
    for update in candidates:
        acc += (update.sample_count / total) * update.model.values.astype(np.float64)
    return ModelParams(own.model.layer_shapes, acc.astype(np.float32))


def krum_scores(vectors: np.ndarray, f: int) -> np.ndarray:
    """Sum of squared distances from each row to its m - f - 2 nearest other rows."""
    m = vectors.shape[0]
    diffs = vectors[:, None, :] - vectors[None, :, :]
    distances = np.einsum("ijk,ijk->ij", diffs, diffs)
    nearest = m - f - 2
    scores = np.empty(m, dtype=np.float64)
    for i in range(m):
        others = np.sort(np.delete(distances[i], i))
        scores[i] = others[:nearest].sum()
    return scores


def krum(own: NeighborUpdate, received: Sequence[NeighborUpdate], f: int) -> ModelParams:
    """Return the candidate closest to its m - f - 2 nearest peers.

    Ties go to the lowest node id.

    Raises:
        TooFewUpdates: If fewer than 2f + 3 candidates are available
        ShapeMismatch: If any model has a different architecture
    """
    candidates = _ordered(own, received)
    m = len(candidates)
    if f < 0 or m < 2 * f + 3:
        raise TooFewUpdates(f"Krum with f={f} needs {2 * f + 3} candidates, got {m}",
                            error_code="A002")
    vectors = np.stack([u.model.values.astype(np.float64) for u in candidates])
    scores = krum_scores(vectors, f)
    winner = int(np.argmin(scores))  # first minimum = lowest id
    return candidates[winner].model


def green_sa(own: NeighborUpdate, received: Sequence[NeighborUpdate],
             c_thresh: float) -> SelectiveResult:
    """Average own model with neighbors whose reported emissions are <= c_thresh."""
    selected = [u for u in received if u.reported_emissions <= c_thresh]
    model = fedavg(own, selected)
    return SelectiveResult(model, frozenset(u.sender for u in selected))


def percentile_threshold(values: Sequence[float], q: float) -> float:
    """Nearest-rank percentile of `values`.

    Raises:
        EmptyInput: If values is empty
    """
    if len(values) == 0:
        raise EmptyInput("Cannot take a percentile of no values", error_code="A003")
    if not 0 < q < 100:
        raise AggregationError(f"Percentile must lie in (0, 100), got {q}", error_code="A004")
    ordered = sorted(values)
    index = max(math.ceil(q / 100.0 * len(ordered)) - 1, 0)
    return ordered[index]


def aggregation_work(kind: AggregationKind, models: int, params: int) -> int:
    """Parameters touched when aggregating `models` models of `params` scalars.

    Averaging reads every model once; Krum evaluates all ordered pairwise
    distances.
    """
    if kind is AggregationKind.KRUM:
        return models * (models - 1) * params
    return models * params
