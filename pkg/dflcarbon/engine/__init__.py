"""Round orchestration: clock, plans, early stopping and the simulator."""

from dflcarbon.engine.clock import Durations, modeled_durations, phase_durations
from dflcarbon.engine.early_stopping import early_stop_check
from dflcarbon.engine.plan import RoundPlan, apply_selection, initial_plan
from dflcarbon.engine.simulator import (
    FederationState,
    Message,
    RoundMetrics,
    RoundOutcome,
    RunResult,
    Simulation,
    derive_seed,
    run_scenario,
)

__all__ = [
    'Durations',
    'FederationState',
    'Message',
    'RoundMetrics',
    'RoundOutcome',
    'RoundPlan',
    'RunResult',
    'Simulation',
    'apply_selection',
    'derive_seed',
    'early_stop_check',
    'initial_plan',
    'modeled_durations',
    'phase_durations',
    'run_scenario',
]
