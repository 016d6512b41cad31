"""Energy and carbon accounting."""

from dflcarbon.accounting.carbon import (
    EmissionRecord,
    EmissionTotals,
    effective_carbon_intensity,
    emissions,
    total_emissions,
)
from dflcarbon.accounting.energy import (
    ComputeEnergy,
    EnergyRecord,
    EnergyTotals,
    Phase,
    PhaseObservation,
    aggregation_energy,
    communication_energy,
    energy_record,
    ledger_order,
    phase_joules,
    total_energy,
    training_energy,
)

__all__ = [
    'ComputeEnergy',
    'EmissionRecord',
    'EmissionTotals',
    'EnergyRecord',
    'EnergyTotals',
    'Phase',
    'PhaseObservation',
    'aggregation_energy',
    'communication_energy',
    'effective_carbon_intensity',
    'emissions',
    'energy_record',
    'ledger_order',
    'phase_joules',
    'total_emissions',
    'total_energy',
    'training_energy',
]
