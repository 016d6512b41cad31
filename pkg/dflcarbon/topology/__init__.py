"""Communication topologies."""

from dflcarbon.topology.topology import (
    Topology,
    TopologyKind,
    TopologySpec,
    build_topology,
    directed_exchanges_per_round,
)

__all__ = [
    'Topology',
    'TopologyKind',
    'TopologySpec',
    'build_topology',
    'directed_exchanges_per_round',
]
