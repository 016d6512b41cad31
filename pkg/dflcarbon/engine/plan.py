"""Per-round plans: which nodes train, over which graph, with which strategies."""

from dataclasses import dataclass, replace
from typing import FrozenSet

from dflcarbon.aggregation.strategies import AggregationSpec
from dflcarbon.core.exceptions import SimulationError
from dflcarbon.selection.voting import SelectionKind, SelectionResult
from dflcarbon.topology.topology import Topology


@dataclass(frozen=True)
class RoundPlan:
    round: int
    trainers: FrozenSet[int]
    topology: Topology
    aggregation: AggregationSpec
    selection: SelectionKind = SelectionKind.NONE

    def __post_init__(self):
        if self.round < 1:
            raise SimulationError(f"Round index starts at 1, got {self.round}",
                                  error_code="R002")
        outside = [n for n in self.trainers if not 0 <= n < self.topology.k]
        if outside:
            raise SimulationError(f"Trainers {sorted(outside)} are not federation nodes",
                                  error_code="R002")

    @property
    def bridges(self) -> FrozenSet[int]:
        return frozenset(range(self.topology.k)) - self.trainers

    def next_round(self) -> "RoundPlan":
        """Plan for the following round with every node training again."""
        return replace(self, round=self.round + 1, trainers=frozenset(range(self.topology.k)))


def initial_plan(topology: Topology, aggregation: AggregationSpec,
                 selection: SelectionKind = SelectionKind.NONE) -> RoundPlan:
    return RoundPlan(1, frozenset(range(topology.k)), topology, aggregation, selection)


def apply_selection(plan: RoundPlan, result: SelectionResult) -> RoundPlan:
    """Drop the vote's bridge nodes from the plan's trainers."""
    if not result.bridge_set:
        return plan
    return replace(plan, trainers=plan.trainers - result.bridge_set)
