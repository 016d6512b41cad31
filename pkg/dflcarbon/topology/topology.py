"""Undirected communication graphs among federation nodes."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import networkx as nx
import numpy as np

from dflcarbon.core.exceptions import InvalidSpec

logger = logging.getLogger(__name__)


class TopologyKind(Enum):
    """Supported graph families."""
    FULLY_CONNECTED = "fully_connected"
    ERDOS_RENYI = "erdos_renyi"
    RING = "ring"


@dataclass(frozen=True)
class TopologySpec:
    """Graph family plus its edge probability (Erdos-Renyi only)."""
    kind: TopologyKind
    p: Optional[float] = None

    def __str__(self) -> str:
        if self.kind is TopologyKind.ERDOS_RENYI:
            return f"{self.kind.value}:{self.p:g}"
        return self.kind.value

    @classmethod
    def parse(cls, text: str) -> "TopologySpec":
        """Parse 'ring', 'fully_connected' or 'erdos_renyi:0.5'."""
        name, _, arg = text.strip().lower().partition(":")
        aliases = {"fc": "fully_connected", "full": "fully_connected", "er": "erdos_renyi"}
        try:
            kind = TopologyKind(aliases.get(name, name))
        except ValueError:
            raise InvalidSpec(f"Unknown topology '{text}'", error_code="T003")
        if kind is TopologyKind.ERDOS_RENYI:
            try:
                return cls(kind, float(arg) if arg else 0.5)
            except ValueError:
                raise InvalidSpec(f"Bad edge probability in '{text}'", error_code="T002")
        return cls(kind)


@dataclass(frozen=True)
class Topology:
    """Immutable neighbor map; adjacency[i] is node i's sorted neighbor tuple."""
    k: int
    adjacency: Tuple[Tuple[int, ...], ...]
    spec: Optional[TopologySpec] = None
    repaired_edges: Tuple[Tuple[int, int], ...] = field(default=())

    def neighbors(self, node: int) -> Tuple[int, ...]:
        return self.adjacency[node]

    def degree(self, node: int) -> int:
        return len(self.adjacency[node])

    @property
    def edges(self) -> Tuple[Tuple[int, int], ...]:
        """Undirected edges (i, j) with i < j in ascending order."""
        return tuple((i, j) for i in range(self.k) for j in self.adjacency[i] if i < j)

    @property
    def edge_count(self) -> int:
        return sum(len(n) for n in self.adjacency) // 2

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "spec": str(self.spec) if self.spec else None,
            "adjacency": {str(i): list(n) for i, n in enumerate(self.adjacency)},
            "repaired_edges": [list(e) for e in self.repaired_edges],
        }

    @classmethod
    def from_graph(cls, graph: nx.Graph, spec: Optional[TopologySpec] = None,
                   repaired_edges: Tuple[Tuple[int, int], ...] = ()) -> "Topology":
        adjacency = tuple(
            tuple(sorted(j for j in graph.neighbors(i) if j != i))
            for i in range(graph.number_of_nodes())
        )
        return cls(graph.number_of_nodes(), adjacency, spec, tuple(repaired_edges))


def _repair_connectivity(graph: nx.Graph) -> Tuple[Tuple[int, int], ...]:
    """Add chain edges (i, i+1) in ascending i until the graph is connected."""
    component_of = {}
    for index, component in enumerate(nx.connected_components(graph)):
        for node in component:
            component_of[node] = index
    added = []
    for i in range(graph.number_of_nodes() - 1):
        a, b = component_of[i], component_of[i + 1]
        if a != b:
            graph.add_edge(i, i + 1)
            added.append((i, i + 1))
            for node, comp in component_of.items():
                if comp == b:
                    component_of[node] = a
    return tuple(added)


def build_topology(spec: TopologySpec, k: int, seed: int = 0) -> Topology:
    """Generate a topology over nodes 0..k-1.

    Erdos-Renyi graphs draw each unordered pair with probability p from a
    PRNG seeded by `seed`; disconnected samples are repaired with chain
    edges, which are recorded in `Topology.repaired_edges`.

    Raises:
        InvalidSpec: If k < 2 or p is outside (0, 1]
    """
    if k < 2:
        raise InvalidSpec(f"A federation needs at least 2 nodes, got {k}", error_code="T001")

    if spec.kind is TopologyKind.FULLY_CONNECTED:
        return Topology.from_graph(nx.complete_graph(k), spec)
    if spec.kind is TopologyKind.RING:
        return Topology.from_graph(nx.cycle_graph(k), spec)

    p = spec.p
    if p is None or not 0.0 < p <= 1.0:
        raise InvalidSpec(f"Erdos-Renyi p must lie in (0, 1], got {p}", error_code="T002")

    rng = np.random.default_rng(seed)
    graph = nx.empty_graph(k)
    rows, cols = np.triu_indices(k, 1)
    keep = rng.random(rows.size) < p
    graph.add_edges_from(zip(rows[keep].tolist(), cols[keep].tolist()))

    repaired = ()
    if not nx.is_connected(graph):
        repaired = _repair_connectivity(graph)
        logger.debug("ER topology (k=%d, p=%g, seed=%d) repaired with %s", k, p, seed, repaired)
    return Topology.from_graph(graph, spec, repaired)


def directed_exchanges_per_round(topology: Topology) -> int:
    """Model transfers per round when every node sends to every neighbor."""
    return 2 * topology.edge_count
