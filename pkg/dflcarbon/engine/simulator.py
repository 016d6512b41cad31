"""
Round-by-round DFL simulation with energy and carbon bookkeeping.

Each round runs three phases for every node:

    training       trainers run local SGD; bridges idle
    communication  trainers send their serialized model to every neighbor;
                   bridges relay each model they receive once to their
                   other neighbors
    aggregation    trainers combine their model with the distinct models
                   they received, per the configured strategy

Every phase yields one PhaseObservation per node, which the accounting
modules turn into joules and grams of CO2.
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from dflcarbon.accounting.carbon import EmissionRecord, effective_carbon_intensity, emissions
from dflcarbon.accounting.energy import EnergyRecord, Phase, PhaseObservation, energy_record
from dflcarbon.aggregation.strategies import (
    AggregationKind,
    NeighborUpdate,
    aggregation_work,
    fedavg,
    green_sa,
    krum,
    percentile_threshold,
)
from dflcarbon.config.scenario import ClockMode, ScenarioConfig, scenario_fingerprint
from dflcarbon.core.exceptions import SimulationError
from dflcarbon.engine.clock import phase_durations
from dflcarbon.engine.early_stopping import early_stop_check
from dflcarbon.engine.plan import RoundPlan, apply_selection, initial_plan
from dflcarbon.error.diagnostics import DiagnosticKind, DiagnosticReporter
from dflcarbon.learning.codec import deserialize_model, serialize_model
from dflcarbon.learning.dataset import Dataset, generate_dataset, train_test_split
from dflcarbon.learning.metrics import evaluate
from dflcarbon.learning.mlp import ModelParams, init_params, mlp_shapes, train_local
from dflcarbon.learning.partition import partition
from dflcarbon.selection.voting import SelectionKind, SelectionResult, VoteTally, select_participants
from dflcarbon.topology.topology import Topology, build_topology

logger = logging.getLogger(__name__)

# Sub-stream tags for seed derivation.
_DATA_STREAM = 1
_SPLIT_STREAM = 2
_PARTITION_STREAM = 3
_INIT_STREAM = 4
_TRAIN_STREAM = 5


def derive_seed(seed: int, *tags: int) -> int:
    """Independent 64-bit seed for one named sub-stream of a run."""
    state = np.random.SeedSequence([seed, *tags]).generate_state(1, dtype=np.uint64)
    return int(state[0])


@dataclass(frozen=True)
class Message:
    """One model transfer; relayed copies have origin != sender."""
    round: int
    sender: int
    receiver: int
    origin: int
    nbytes: int


@dataclass(frozen=True)
class RoundMetrics:
    """Held-out scores averaged over the nodes that trained this round."""
    round: int
    macro_f1: float
    loss: float
    accuracy: float
    trainers: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class FederationState:
    """Everything that carries over from one round to the next."""
    round: int
    models: Tuple[ModelParams, ...]
    reported_emissions: Tuple[float, ...]
    c_thresh: Optional[float] = None


@dataclass(frozen=True, eq=False)
class RoundOutcome:
    state: FederationState
    observations: Tuple[PhaseObservation, ...]
    energy: Tuple[EnergyRecord, ...]
    emissions: Tuple[EmissionRecord, ...]
    messages: Tuple[Message, ...]
    metrics: RoundMetrics
    selection: Optional[SelectionResult] = None


@dataclass(eq=False)
class RunResult:
    """Full ledger of a run plus final models and run metadata."""
    config: ScenarioConfig
    fingerprint: str
    topology: Topology
    observations: List[PhaseObservation] = field(default_factory=list)
    energy: List[EnergyRecord] = field(default_factory=list)
    emissions: List[EmissionRecord] = field(default_factory=list)
    messages: List[Message] = field(default_factory=list)
    metrics: List[RoundMetrics] = field(default_factory=list)
    tallies: Dict[int, Tuple[VoteTally, ...]] = field(default_factory=dict)
    diagnostics: DiagnosticReporter = field(default_factory=DiagnosticReporter)
    final_models: Tuple[ModelParams, ...] = ()
    c_thresh: Optional[float] = None
    stopped_early: bool = False

    @property
    def rounds_executed(self) -> int:
        return len(self.metrics)

    @property
    def final_f1(self) -> float:
        return self.metrics[-1].macro_f1 if self.metrics else 0.0

    @property
    def loss_history(self) -> List[float]:
        return [m.loss for m in self.metrics]


class Simulation:
    """Static context of one run: data shards, graph, profiles and diagnostics."""

    def __init__(self, config: ScenarioConfig, diagnostics: Optional[DiagnosticReporter] = None):
        self.config = config
        self.diagnostics = diagnostics or DiagnosticReporter()
        self.profiles = config.nodes
        self.topology = build_topology(config.topology, config.k, config.seed)

        train_samples = config.data.samples_per_node * config.k
        test_samples = max(train_samples // 4, 1)
        data = generate_dataset(config.data.classes, config.data.features,
                                train_samples + test_samples,
                                derive_seed(config.seed, _DATA_STREAM))
        self.train_data, self.test_data = train_test_split(
            data, test_samples, derive_seed(config.seed, _SPLIT_STREAM))
        split = partition(self.train_data, config.k, config.data.partition,
                          derive_seed(config.seed, _PARTITION_STREAM))
        self.shards: Tuple[Dataset, ...] = tuple(self.train_data.subset(s) for s in split.shards)
        self.layer_shapes = mlp_shapes(config.data.features, config.model.hidden_sizes,
                                       config.data.classes)
        self.effective_ci = tuple(effective_carbon_intensity(p.region) for p in self.profiles)
        self._record_setup_diagnostics(split.moves)

    def _record_setup_diagnostics(self, moves) -> None:
        report = self.diagnostics
        if self.topology.repaired_edges:
            report.report_warning(
                DiagnosticKind.ER_REPAIR,
                f"Sampled graph was disconnected; added chain edges "
                f"{list(self.topology.repaired_edges)}")
        if moves:
            report.report_warning(
                DiagnosticKind.DIRICHLET_REPAIR,
                f"Moved one sample (donor, receiver) to fill empty nodes: {list(moves)}")
        report.report_info(
            DiagnosticKind.CONSTANT_UTILIZATION,
            "CPU utilization is the profile constant for every round")
        aggregation = self.config.aggregation
        if aggregation.kind is AggregationKind.GREEN_SA:
            report.report_info(
                DiagnosticKind.SA_WEIGHTING,
                "Admitted neighbor models are averaged with the own model, weighted by "
                "sample count")
            report.report_info(
                DiagnosticKind.SA_REPORT_SEMANTICS,
                "Reported emissions are the sender's total of the previous round "
                "(zero in round 1)")
        if self.config.selection is SelectionKind.GREEN_SN:
            report.report_info(
                DiagnosticKind.SN_STALE_EXCLUSION,
                "Bridge nodes send no model of their own; only freshly trained models "
                "are aggregated")
            report.report_info(
                DiagnosticKind.SN_RELAY,
                "Bridge nodes relay each received model once to their other neighbors, "
                "charged to the bridge")
            if aggregation.kind is AggregationKind.GREEN_SA:
                report.report_warning(
                    DiagnosticKind.SA_SN_EXPERIMENTAL,
                    "Threshold aggregation combined with voting selection is experimental")
        if self.config.clock is ClockMode.MEASURED:
            report.report_warning(
                DiagnosticKind.MEASURED_CLOCK,
                "Durations come from wall time; results are not reproducible")

    def initial_state(self) -> FederationState:
        model = init_params(self.layer_shapes, derive_seed(self.config.seed, _INIT_STREAM))
        k = self.config.k
        c_thresh = self.config.aggregation.c_thresh
        return FederationState(0, tuple(model for _ in range(k)), tuple(0.0 for _ in range(k)),
                               c_thresh)

    # ----------------------------------------------------------------------
    # Phases
    # ----------------------------------------------------------------------

    def _train(self, state: FederationState, plan: RoundPlan):
        models = list(state.models)
        samples = [0] * self.config.k
        wall = [0.0] * self.config.k
        for node in sorted(plan.trainers):
            outcome = train_local(state.models[node], self.shards[node], self.config.local_epochs,
                                  self.config.learning_rate,
                                  derive_seed(self.config.seed, _TRAIN_STREAM, plan.round, node))
            models[node] = outcome.params
            samples[node] = outcome.samples_processed
            wall[node] = outcome.wall_seconds
        return models, samples, wall

    def _exchange(self, models: List[ModelParams], plan: RoundPlan):
        """Deliver models; returns the message log and each node's inbox by origin."""
        topology = plan.topology
        payloads = {node: serialize_model(models[node]) for node in sorted(plan.trainers)}
        messages: List[Message] = []
        for sender in sorted(plan.trainers):
            for receiver in topology.neighbors(sender):
                messages.append(Message(plan.round, sender, receiver, sender,
                                        len(payloads[sender])))
        direct = list(messages)
        for bridge in sorted(plan.bridges):
            for message in direct:
                if message.receiver != bridge:
                    continue
                for receiver in topology.neighbors(bridge):
                    if receiver != message.sender:
                        messages.append(Message(plan.round, bridge, receiver, message.origin,
                                                message.nbytes))

        inbox: Dict[int, Dict[int, ModelParams]] = {n: {} for n in range(topology.k)}
        for message in messages:
            if message.origin == message.receiver:
                continue
            received = inbox[message.receiver]
            if message.origin not in received:
                received[message.origin] = deserialize_model(payloads[message.origin])
        return messages, inbox

    def _aggregate(self, node: int, own: ModelParams, received: Dict[int, ModelParams],
                   state: FederationState, plan: RoundPlan) -> Tuple[ModelParams, int]:
        """New model for `node` and the number of models the strategy processed."""
        def update(sender: int, model: ModelParams) -> NeighborUpdate:
            return NeighborUpdate(sender, model, len(self.shards[sender]),
                                  state.reported_emissions[sender])

        own_update = update(node, own)
        others = [update(sender, received[sender]) for sender in sorted(received)]
        spec = plan.aggregation
        if spec.kind is AggregationKind.KRUM:
            if len(others) + 1 >= 2 * spec.f + 3:
                return krum(own_update, others, spec.f), len(others) + 1
            self.diagnostics.report_warning(
                DiagnosticKind.KRUM_FALLBACK,
                f"Node {node} has {len(others) + 1} candidates, fewer than {2 * spec.f + 3}; "
                f"averaging instead", plan.round)
            return fedavg(own_update, others), len(others) + 1
        if spec.kind is AggregationKind.GREEN_SA:
            threshold = state.c_thresh if state.c_thresh is not None else math.inf
            result = green_sa(own_update, others, threshold)
            return result.model, len(result.selected) + 1
        return fedavg(own_update, others), len(others) + 1

    # ----------------------------------------------------------------------
    # Round
    # ----------------------------------------------------------------------

    def run_round(self, state: FederationState, plan: RoundPlan) -> RoundOutcome:
        """Execute one train / exchange / aggregate cycle.

        Raises:
            NumericError: If local training diverges
            SimulationError: If the round does not follow the previous one or
                the byte ledger does not balance
        """
        if plan.round != state.round + 1:
            raise SimulationError(f"Round {plan.round} cannot follow round {state.round}",
                                  error_code="R002")
        k = self.config.k
        trained, samples, train_wall = self._train(state, plan)
        messages, inbox = self._exchange(trained, plan)

        bytes_sent = [0] * k
        bytes_recv = [0] * k
        for message in messages:
            bytes_sent[message.sender] += message.nbytes
            bytes_recv[message.receiver] += message.nbytes
        if sum(bytes_sent) != sum(bytes_recv):
            raise SimulationError("Sent and received bytes do not balance", error_code="R003")

        params = trained[0].size
        new_models = list(trained)
        work = [0] * k
        agg_wall = [0.0] * k
        for node in sorted(plan.trainers):
            started = time.perf_counter()
            new_models[node], used = self._aggregate(node, trained[node], inbox[node], state, plan)
            agg_wall[node] = time.perf_counter() - started
            work[node] = aggregation_work(plan.aggregation.kind, used, params)

        observations: List[PhaseObservation] = []
        records: List[EnergyRecord] = []
        grams: List[EmissionRecord] = []
        for node in range(k):
            profile = self.profiles[node]
            durations = phase_durations(self.config.clock, profile, samples[node], work[node],
                                        train_wall[node], agg_wall[node])
            node_obs = (
                PhaseObservation(node, plan.round, Phase.TRAINING, durations.train_s),
                PhaseObservation(node, plan.round, Phase.COMMUNICATION, 0.0,
                                 bytes_sent[node], bytes_recv[node]),
                PhaseObservation(node, plan.round, Phase.AGGREGATION, durations.agg_s),
            )
            for observation in node_obs:
                record = energy_record(observation, profile)
                observations.append(observation)
                records.append(record)
                grams.append(emissions(record, profile.region))

        reported = [0.0] * k
        for record in grams:
            reported[record.node] += record.grams_co2

        c_thresh = state.c_thresh
        percentile = plan.aggregation.percentile
        if percentile is not None and c_thresh is None:
            c_thresh = percentile_threshold(reported, percentile)
            self.diagnostics.report_info(
                DiagnosticKind.PERCENTILE_THRESHOLD,
                f"Resolved the p{percentile:g} emission threshold to {c_thresh!r} gCO2 "
                f"from round-{plan.round} node totals", plan.round)

        selection = None
        if plan.selection is SelectionKind.GREEN_SN:
            selection = select_participants(plan.topology, dict(enumerate(self.effective_ci)))

        scored = sorted(plan.trainers)
        scores = [evaluate(new_models[node], self.test_data) for node in scored]
        metrics = RoundMetrics(
            round=plan.round,
            macro_f1=float(np.mean([s.macro_f1 for s in scores])),
            loss=float(np.mean([s.loss for s in scores])),
            accuracy=float(np.mean([s.accuracy for s in scores])),
            trainers=tuple(scored),
        )
        logger.debug("Round %d: trainers=%d f1=%.4f loss=%.4f", plan.round, len(scored),
                     metrics.macro_f1, metrics.loss)

        new_state = FederationState(plan.round, tuple(new_models), tuple(reported), c_thresh)
        return RoundOutcome(new_state, tuple(observations), tuple(records), tuple(grams),
                            tuple(messages), metrics, selection)

    def run(self) -> RunResult:
        """Run every configured round, or until early stopping triggers."""
        config = self.config
        result = RunResult(config, scenario_fingerprint(config), self.topology)
        state = self.initial_state()
        plan = initial_plan(self.topology, config.aggregation, config.selection)
        for _ in range(config.rounds):
            outcome = self.run_round(state, plan)
            state = outcome.state
            result.observations.extend(outcome.observations)
            result.energy.extend(outcome.energy)
            result.emissions.extend(outcome.emissions)
            result.messages.extend(outcome.messages)
            result.metrics.append(outcome.metrics)
            if outcome.selection is not None:
                result.tallies[outcome.metrics.round] = outcome.selection.tallies

            stopping = config.early_stopping
            if stopping is not None and early_stop_check(result.loss_history, stopping.patience,
                                                         stopping.min_delta):
                self.diagnostics.report_info(
                    DiagnosticKind.EARLY_STOP,
                    f"Validation loss plateaued for {stopping.patience} rounds; stopping",
                    plan.round)
                result.stopped_early = True
                break

            plan = plan.next_round()
            if outcome.selection is not None:
                plan = apply_selection(plan, outcome.selection)

        result.final_models = state.models
        result.c_thresh = state.c_thresh
        result.diagnostics = self.diagnostics
        logger.info("Run %s finished after %d round(s)", config.name, result.rounds_executed)
        return result


def run_scenario(config: ScenarioConfig,
                 diagnostics: Optional[DiagnosticReporter] = None) -> RunResult:
    """Simulate a validated scenario end to end."""
    return Simulation(config, diagnostics).run()
