"""Core data structures shared by every dflcarbon module."""

from dflcarbon.core.field_location import FieldLocation
from dflcarbon.core.profiles import (
    CommMedium,
    GpuProfile,
    HardwareProfile,
    MEDIUM_ENERGY_PER_BYTE,
    MediumKind,
    NodeProfile,
    REGION_PRESETS,
    RegionProfile,
    ingest_medium,
    parse_medium_kind,
)
from dflcarbon.core.units import JOULES_PER_KWH, joules_to_kwh, kwh_to_joules

__all__ = [
    "FieldLocation",
    "CommMedium",
    "GpuProfile",
    "HardwareProfile",
    "MEDIUM_ENERGY_PER_BYTE",
    "MediumKind",
    "NodeProfile",
    "REGION_PRESETS",
    "RegionProfile",
    "ingest_medium",
    "parse_medium_kind",
    "JOULES_PER_KWH",
    "joules_to_kwh",
    "kwh_to_joules",
]
