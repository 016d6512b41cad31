"""Carbon accounting: effective intensity per node and grams of CO2 per record."""

from dataclasses import dataclass, field
from typing import Dict, Iterable

from dflcarbon.accounting.energy import EnergyRecord, Phase, ledger_order
from dflcarbon.core.profiles import RegionProfile
from dflcarbon.core.units import joules_to_kwh

# Operational emissions of self-generated renewables are taken as zero.
RENEWABLE_CARBON_INTENSITY = 0.0


@dataclass(frozen=True)
class EmissionRecord:
    node: int
    round: int
    phase: Phase
    grams_co2: float
    effective_ci: float


def effective_carbon_intensity(region: RegionProfile) -> float:
    """Grid intensity weighted by the share of energy drawn from the grid."""
    grid_share = region.grid_carbon_intensity * (1.0 - region.renewable_ratio)
    return grid_share + RENEWABLE_CARBON_INTENSITY * region.renewable_ratio


def emissions(record: EnergyRecord, region: RegionProfile) -> EmissionRecord:
    """gCO2 for one energy record at the node's effective intensity."""
    ci = effective_carbon_intensity(region)
    return EmissionRecord(record.node, record.round, record.phase,
                          joules_to_kwh(record.total_joules) * ci, ci)


@dataclass(frozen=True)
class EmissionTotals:
    per_node: Dict[int, float] = field(default_factory=dict)
    per_phase: Dict[Phase, float] = field(default_factory=dict)
    total: float = 0.0


def total_emissions(records: Iterable[EmissionRecord]) -> EmissionTotals:
    """Sum grams in ledger order, by node, by phase and overall."""
    per_node: Dict[int, float] = {}
    per_phase = {phase: 0.0 for phase in Phase}
    total = 0.0
    for record in sorted(records, key=ledger_order):
        per_node[record.node] = per_node.get(record.node, 0.0) + record.grams_co2
        per_phase[record.phase] += record.grams_co2
        total += record.grams_co2
    return EmissionTotals(per_node, per_phase, total)
