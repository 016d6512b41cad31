"""Scenario configuration: JSON scenarios, profile registries and sweep overrides."""

from dflcarbon.config.scenario import (
    ClockMode,
    DataSpec,
    EarlyStoppingSpec,
    ModelSpec,
    SCHEMA_VERSION,
    ScenarioConfig,
    canonical_json,
    dump_scenario,
    load_scenario,
    parse_scenario,
    scenario_fingerprint,
    to_dict,
)
from dflcarbon.config.registry import (
    REGISTRY_COLUMNS,
    load_profile_registry,
    write_profile_registry,
)
from dflcarbon.config.overrides import apply_override, parse_vary

__all__ = [
    'ClockMode',
    'DataSpec',
    'EarlyStoppingSpec',
    'ModelSpec',
    'REGISTRY_COLUMNS',
    'SCHEMA_VERSION',
    'ScenarioConfig',
    'apply_override',
    'canonical_json',
    'dump_scenario',
    'load_profile_registry',
    'load_scenario',
    'parse_scenario',
    'parse_vary',
    'scenario_fingerprint',
    'to_dict',
]
