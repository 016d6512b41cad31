"""Tests for carbon-intensity voting."""

import networkx as nx
import numpy as np
import pytest

from dflcarbon.core.exceptions import MissingReport
from dflcarbon.selection import cast_votes, select_participants
from dflcarbon.topology import Topology, TopologyKind, TopologySpec, build_topology

LINE = Topology.from_graph(nx.path_graph(5))
LINE_CI = {0: 150.0, 1: 180.0, 2: 220.0, 3: 260.0, 4: 140.0}


class TestVoting:
    """Test vote casting and retention."""

    def test_line_example(self):
        result = select_participants(LINE, LINE_CI)
        tallies = [(t.positive_votes, t.neighbor_count) for t in result.tallies]
        assert tallies == [(1, 1), (1, 2), (1, 2), (0, 2), (1, 1)]
        assert result.training_set == frozenset({0, 1, 2, 4})
        assert result.bridge_set == frozenset({3})

    def test_tally_text(self):
        result = select_participants(LINE, LINE_CI)
        assert str(result.tallies[1]) == "1:1/2 (retain)"
        assert str(result.tallies[3]) == "3:0/2 (exclude)"

    def test_ring_of_four(self):
        ring = build_topology(TopologySpec(TopologyKind.RING), 4)
        result = select_participants(ring, {0: 1.0, 1: 2.0, 2: 3.0, 3: 4.0})
        assert [t.positive_votes for t in result.tallies] == [2, 1, 1, 0]
        assert result.training_set == frozenset({0, 1, 2})
        assert result.bridge_set == frozenset({3})

    def test_homogeneous_keeps_everyone(self):
        topology = build_topology(TopologySpec(TopologyKind.ERDOS_RENYI, 0.4), 9, seed=2)
        result = select_participants(topology, {i: 100.0 for i in range(9)})
        assert result.training_set == frozenset(range(9))
        for tally in result.tallies:
            assert tally.positive_votes == topology.degree(tally.node)

    def test_two_nodes(self):
        topology = build_topology(TopologySpec(TopologyKind.FULLY_CONNECTED), 2)
        assert cast_votes(topology, {0: 10.0, 1: 20.0}) == {0: 1, 1: 0}

    def test_missing_report(self):
        with pytest.raises(MissingReport) as exc:
            cast_votes(LINE, {0: 1.0, 1: 2.0})
        assert exc.value.error_code == "A005"


class TestVotingProperties:
    """Properties over random graphs and intensities."""

    @staticmethod
    def random_case(seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(2, 12))
        topology = build_topology(TopologySpec(TopologyKind.ERDOS_RENYI, 0.4), k, seed=seed)
        ci = {i: float(rng.integers(0, 5)) * 50.0 for i in range(k)}
        return topology, ci

    @pytest.mark.parametrize("seed", range(30))
    def test_every_edge_carries_a_vote(self, seed):
        """Each edge yields one or two votes, two exactly when the ends tie."""
        topology, ci = self.random_case(seed)
        votes = cast_votes(topology, ci)
        ties = sum(1 for i, j in topology.edges if ci[i] == ci[j])
        assert sum(votes.values()) == topology.edge_count + ties

    @pytest.mark.parametrize("seed", range(30))
    def test_lowering_intensity_never_loses_votes(self, seed):
        topology, ci = self.random_case(seed)
        before = cast_votes(topology, ci)
        cleaner = {**ci, 0: ci[0] - 25.0}
        after = cast_votes(topology, cleaner)
        assert after[0] >= before[0]

    @pytest.mark.parametrize("seed", range(30))
    def test_votes_depend_on_neighbors_only(self, seed):
        topology, ci = self.random_case(seed)
        before = cast_votes(topology, ci)
        for node in range(topology.k):
            outsiders = [j for j in range(topology.k)
                         if j != node and j not in topology.neighbors(node)]
            if not outsiders:
                continue
            changed = {**ci, outsiders[0]: ci[outsiders[0]] + 1000.0}
            assert cast_votes(topology, changed)[node] == before[node]
