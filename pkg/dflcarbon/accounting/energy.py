"""
Energy accounting per node, round and phase.

    E = E_train + E_comm + E_agg
    E_train = PUE * TDP * beta_train * T_train  (+ P_gpu * T_train)
    E_comm  = (B_sent + B_recv) * E_byte
    E_agg   = PUE * TDP * beta_agg * T_agg      (+ P_gpu * T_agg)

Everything is in joules; totals are reported in kWh.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, NamedTuple, Optional

from dflcarbon.core.exceptions import SimulationError
from dflcarbon.core.profiles import CommMedium, HardwareProfile, NodeProfile
from dflcarbon.core.units import joules_to_kwh


class Phase(Enum):
    """DFL lifecycle stages in ledger order."""
    TRAINING = "training"
    COMMUNICATION = "communication"
    AGGREGATION = "aggregation"

    @property
    def order(self) -> int:
        return _PHASE_ORDER[self]


_PHASE_ORDER = {Phase.TRAINING: 0, Phase.COMMUNICATION: 1, Phase.AGGREGATION: 2}


@dataclass(frozen=True)
class PhaseObservation:
    """What one node did in one phase of one round."""
    node: int
    round: int
    phase: Phase
    duration_s: float = 0.0
    bytes_sent: int = 0
    bytes_recv: int = 0

    def __post_init__(self):
        if self.round < 1:
            raise SimulationError(f"Round index starts at 1, got {self.round}", error_code="R001")
        if self.duration_s < 0:
            raise SimulationError(f"Negative duration {self.duration_s}", error_code="R001")
        if self.bytes_sent < 0 or self.bytes_recv < 0:
            raise SimulationError("Byte counts must be >= 0", error_code="R001")
        if self.phase is not Phase.COMMUNICATION and (self.bytes_sent or self.bytes_recv):
            raise SimulationError(
                f"Only the communication phase moves bytes (got {self.phase.value})",
                error_code="R001")


@dataclass(frozen=True)
class EnergyRecord:
    """Joules consumed by one node in one phase of one round."""
    node: int
    round: int
    phase: Phase
    cpu_joules: float = 0.0
    gpu_joules: float = 0.0
    comm_joules: float = 0.0
    total_joules: float = field(init=False)

    def __post_init__(self):
        if min(self.cpu_joules, self.gpu_joules, self.comm_joules) < 0:
            raise SimulationError("Energy components must be >= 0", error_code="R001")
        object.__setattr__(self, "total_joules",
                           self.cpu_joules + self.gpu_joules + self.comm_joules)


class ComputeEnergy(NamedTuple):
    cpu_joules: float
    gpu_joules: float


def _compute_energy(profile: HardwareProfile, utilization: float, duration_s: float) -> ComputeEnergy:
    if duration_s < 0:
        raise SimulationError(f"Negative duration {duration_s}", error_code="R001")
    cpu = profile.pue * profile.tdp_watts * utilization * duration_s
    gpu = profile.gpu.power_watts * duration_s if profile.gpu is not None else 0.0
    return ComputeEnergy(cpu, gpu)


def training_energy(profile: HardwareProfile, duration_s: float) -> ComputeEnergy:
    """CPU and GPU joules for a local-training phase of `duration_s` seconds."""
    return _compute_energy(profile, profile.cpu_utilization_train, duration_s)


def aggregation_energy(profile: HardwareProfile, duration_s: float) -> ComputeEnergy:
    """CPU and GPU joules for an aggregation phase of `duration_s` seconds."""
    return _compute_energy(profile, profile.cpu_utilization_agg, duration_s)


def communication_energy(medium: CommMedium, bytes_sent: int, bytes_recv: int) -> float:
    """Joules spent moving the given byte volume over `medium`."""
    if bytes_sent < 0 or bytes_recv < 0:
        raise SimulationError("Byte counts must be >= 0", error_code="R001")
    return (bytes_sent + bytes_recv) * medium.energy_per_byte


def energy_record(observation: PhaseObservation, profile: NodeProfile) -> EnergyRecord:
    """Convert one phase observation into joules using the node's profile."""
    phase = observation.phase
    if phase is Phase.COMMUNICATION:
        comm = communication_energy(profile.medium, observation.bytes_sent, observation.bytes_recv)
        return EnergyRecord(observation.node, observation.round, phase, comm_joules=comm)
    compute = (training_energy if phase is Phase.TRAINING else aggregation_energy)(
        profile.hardware, observation.duration_s)
    return EnergyRecord(observation.node, observation.round, phase,
                        cpu_joules=compute.cpu_joules, gpu_joules=compute.gpu_joules)


def ledger_order(record) -> tuple:
    """Sort key shared by every accounting fold: node, round, phase."""
    return (record.node, record.round, record.phase.order)


@dataclass(frozen=True)
class EnergyTotals:
    training_kwh: float = 0.0
    communication_kwh: float = 0.0
    aggregation_kwh: float = 0.0
    total_kwh: float = 0.0

    @property
    def per_phase_kwh(self) -> Dict[Phase, float]:
        return {
            Phase.TRAINING: self.training_kwh,
            Phase.COMMUNICATION: self.communication_kwh,
            Phase.AGGREGATION: self.aggregation_kwh,
        }


def phase_joules(records: Iterable[EnergyRecord], node: Optional[int] = None) -> Dict[Phase, float]:
    """Joules per phase in ledger order, optionally for one node only."""
    sums = {phase: 0.0 for phase in Phase}
    for record in sorted(records, key=ledger_order):
        if node is None or record.node == node:
            sums[record.phase] += record.total_joules
    return sums


def total_energy(records: Iterable[EnergyRecord]) -> EnergyTotals:
    """Fold a run's records into per-phase and overall kWh."""
    sums = phase_joules(records)
    training = joules_to_kwh(sums[Phase.TRAINING])
    communication = joules_to_kwh(sums[Phase.COMMUNICATION])
    aggregation = joules_to_kwh(sums[Phase.AGGREGATION])
    return EnergyTotals(training, communication, aggregation,
                        training + communication + aggregation)
