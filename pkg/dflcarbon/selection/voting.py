"""Neighbor voting on carbon intensity to pick next-round trainers."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Mapping, Tuple

from dflcarbon.core.exceptions import MissingReport
from dflcarbon.topology.topology import Topology

logger = logging.getLogger(__name__)


class SelectionKind(Enum):
    NONE = "none"
    GREEN_SN = "green_sn"


@dataclass(frozen=True)
class VoteTally:
    node: int
    positive_votes: int
    neighbor_count: int
    retained: bool

    def __str__(self) -> str:
        verdict = "retain" if self.retained else "exclude"
        return f"{self.node}:{self.positive_votes}/{self.neighbor_count} ({verdict})"


@dataclass(frozen=True)
class SelectionResult:
    training_set: FrozenSet[int]
    bridge_set: FrozenSet[int]
    tallies: Tuple[VoteTally, ...]


def cast_votes(topology: Topology, ci: Mapping[int, float]) -> Dict[int, int]:
    """Positive votes per node: i votes for neighbor j iff CI_j <= CI_i.

    Raises:
        MissingReport: If a node has no entry in `ci`
    """
    missing = [node for node in range(topology.k) if node not in ci]
    if missing:
        raise MissingReport(f"No carbon-intensity report from node(s) {missing}",
                            error_code="A005")
    votes = {node: 0 for node in range(topology.k)}
    for i in range(topology.k):
        for j in topology.neighbors(i):
            if ci[j] <= ci[i]:
                votes[j] += 1
    return votes


def select_participants(topology: Topology, ci: Mapping[int, float]) -> SelectionResult:
    """Retain nodes backed by at least half of their neighbors.

    Excluded nodes become bridges: they skip training but keep relaying.
    """
    votes = cast_votes(topology, ci)
    tallies = []
    for node in range(topology.k):
        degree = topology.degree(node)
        retained = votes[node] >= degree / 2
        tallies.append(VoteTally(node, votes[node], degree, retained))
    training = frozenset(t.node for t in tallies if t.retained)
    bridges = frozenset(t.node for t in tallies if not t.retained)
    logger.debug("Selection: train=%s bridge=%s", sorted(training), sorted(bridges))
    return SelectionResult(training, bridges, tuple(tallies))
