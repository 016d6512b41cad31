"""Splitting a dataset into per-node shards (IID or Dirichlet label skew)."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from dflcarbon.core.exceptions import InvalidArgs
from dflcarbon.learning.dataset import Dataset

logger = logging.getLogger(__name__)


class PartitionKind(Enum):
    IID = "iid"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class PartitionSpec:
    """Partition strategy; alpha is the Dirichlet concentration."""
    kind: PartitionKind
    alpha: Optional[float] = None

    def __str__(self) -> str:
        if self.kind is PartitionKind.DIRICHLET:
            return f"dirichlet:{self.alpha:g}"
        return self.kind.value


@dataclass(frozen=True, eq=False)
class Partition:
    """Disjoint per-node index lists into a Dataset.

    `moves` records empty-node repairs as (donor, receiver) pairs.
    """
    shards: Tuple[np.ndarray, ...]
    moves: Tuple[Tuple[int, int], ...] = ()

    def sizes(self) -> Tuple[int, ...]:
        return tuple(int(s.size) for s in self.shards)


def _iid(n: int, k: int, rng: np.random.Generator):
    order = rng.permutation(n)
    return [chunk.copy() for chunk in np.array_split(order, k)]


def _dirichlet(labels: np.ndarray, classes: int, k: int, alpha: float,
               rng: np.random.Generator):
    shards = [[] for _ in range(k)]
    for c in range(classes):
        members = np.flatnonzero(labels == c)
        if members.size == 0:
            continue
        rng.shuffle(members)
        proportions = rng.dirichlet(np.full(k, alpha))
        counts = rng.multinomial(members.size, proportions)
        start = 0
        for node, count in enumerate(counts):
            shards[node].extend(members[start:start + count].tolist())
            start += count
    return [np.asarray(s, dtype=np.int64) for s in shards]


def partition(data: Dataset, k: int, spec: PartitionSpec, seed: int) -> Partition:
    """Assign every sample of `data` to exactly one of k nodes.

    Raises:
        InvalidArgs: If k < 2, data is empty, there are fewer samples than
            nodes, or alpha <= 0
    """
    n = len(data)
    if k < 2:
        raise InvalidArgs(f"Need at least 2 nodes, got {k}", error_code="L002")
    if n == 0:
        raise InvalidArgs("Cannot partition an empty dataset", error_code="L002")
    if n < k:
        raise InvalidArgs(f"{n} samples cannot give {k} nodes one sample each",
                          error_code="L002")

    rng = np.random.default_rng(seed)
    if spec.kind is PartitionKind.IID:
        return Partition(tuple(_iid(n, k, rng)))

    if spec.alpha is None or not spec.alpha > 0:
        raise InvalidArgs(f"Dirichlet alpha must be > 0, got {spec.alpha}", error_code="L002")
    shards = _dirichlet(data.labels, data.classes, k, spec.alpha, rng)

    moves = []
    for node in range(k):
        if shards[node].size == 0:
            sizes = [s.size for s in shards]
            donor = int(np.argmax(sizes))
            shards[node] = shards[donor][-1:].copy()
            shards[donor] = shards[donor][:-1]
            moves.append((donor, node))
    if moves:
        logger.debug("Dirichlet partition repaired empty nodes: %s", moves)
    return Partition(tuple(shards), tuple(moves))


def label_entropy(labels: np.ndarray, classes: int) -> float:
    """Shannon entropy (nats) of a label histogram."""
    counts = np.bincount(labels, minlength=classes).astype(np.float64)
    if counts.sum() == 0:
        return 0.0
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log(p)).sum())
