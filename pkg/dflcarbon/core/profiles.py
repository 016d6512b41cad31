"""Per-node hardware, region and communication-medium profiles."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from dflcarbon.core.exceptions import UnknownMedium, ValidationError


class MediumKind(Enum):
    """Built-in communication media plus a user-declared one."""
    WIRED_ELECTRICAL = "wired"
    OPTICAL_FIBER = "optical"
    MOBILE_4G5G = "mobile"
    WIFI = "wifi"
    CUSTOM = "custom"


# Energy per transferred byte in joules.
MEDIUM_ENERGY_PER_BYTE = {
    MediumKind.WIRED_ELECTRICAL: 8.0e-11,
    MediumKind.OPTICAL_FIBER: 3.52e-14,
    MediumKind.MOBILE_4G5G: 3.33e-8,
    MediumKind.WIFI: 5.51e-4,
}

# National grid carbon intensities in gCO2/kWh.
REGION_PRESETS = {
    "ES": 217.422,
    "CH": 41.279,
}


@dataclass(frozen=True)
class GpuProfile:
    """Declared average GPU power draw while a phase runs."""
    power_watts: float

    def __post_init__(self):
        if not self.power_watts > 0:
            raise ValidationError(f"GPU power must be > 0 W, got {self.power_watts}",
                                  error_code="V002")


@dataclass(frozen=True)
class HardwareProfile:
    """Facility overhead, CPU ceiling and utilizations of one node."""
    pue: float
    tdp_watts: float
    cpu_utilization_train: float
    cpu_utilization_agg: float
    gpu: Optional[GpuProfile] = None

    def __post_init__(self):
        if self.pue < 1.0:
            raise ValidationError(f"PUE must be >= 1.0, got {self.pue}", error_code="V006")
        if not self.tdp_watts > 0:
            raise ValidationError(f"TDP must be > 0 W, got {self.tdp_watts}", error_code="V002")
        for name in ("cpu_utilization_train", "cpu_utilization_agg"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {value}",
                                      error_code="V001")


@dataclass(frozen=True)
class RegionProfile:
    """Electricity grid of a node and its self-generated renewable share."""
    name: str
    grid_carbon_intensity: float
    renewable_ratio: float = 0.0

    def __post_init__(self):
        if self.grid_carbon_intensity < 0:
            raise ValidationError(
                f"Grid carbon intensity must be >= 0, got {self.grid_carbon_intensity}",
                error_code="V003")
        if not 0.0 <= self.renewable_ratio <= 1.0:
            raise ValidationError(
                f"Renewable ratio must lie in [0, 1], got {self.renewable_ratio}",
                error_code="V001")

    @classmethod
    def preset(cls, name: str, renewable_ratio: float = 0.0) -> "RegionProfile":
        """Build a region from the built-in grid intensity table."""
        key = name.upper()
        if key not in REGION_PRESETS:
            raise ValidationError(
                f"Unknown region preset '{name}' (known: {', '.join(sorted(REGION_PRESETS))})",
                error_code="V011")
        return cls(key, REGION_PRESETS[key], renewable_ratio)


@dataclass(frozen=True)
class CommMedium:
    """Link technology and its energy cost per byte."""
    kind: MediumKind
    energy_per_byte: float

    def __post_init__(self):
        if not self.energy_per_byte > 0:
            raise ValidationError(
                f"Energy per byte must be > 0, got {self.energy_per_byte}",
                error_code="V002")


@dataclass(frozen=True)
class NodeProfile:
    """Everything the accounting needs to know about node k."""
    id: int
    hardware: HardwareProfile
    region: RegionProfile
    medium: CommMedium
    compute_speed: float
    agg_speed: float

    def __post_init__(self):
        if self.id < 0:
            raise ValidationError(f"Node id must be >= 0, got {self.id}", error_code="V003")
        if not self.compute_speed > 0 or not self.agg_speed > 0:
            raise ValidationError(
                f"Node {self.id}: compute_speed and agg_speed must be > 0",
                error_code="V002")


def parse_medium_kind(name: str) -> MediumKind:
    """Map a config string such as 'wired' to its MediumKind."""
    aliases = {
        "wired": MediumKind.WIRED_ELECTRICAL,
        "wired_electrical": MediumKind.WIRED_ELECTRICAL,
        "electrical": MediumKind.WIRED_ELECTRICAL,
        "optical": MediumKind.OPTICAL_FIBER,
        "optical_fiber": MediumKind.OPTICAL_FIBER,
        "mobile": MediumKind.MOBILE_4G5G,
        "4g5g": MediumKind.MOBILE_4G5G,
        "wifi": MediumKind.WIFI,
        "custom": MediumKind.CUSTOM,
    }
    kind = aliases.get(str(name).strip().lower())
    if kind is None:
        raise UnknownMedium(f"Unknown communication medium '{name}'", error_code="C005")
    return kind


def ingest_medium(kind: Union[MediumKind, str]) -> CommMedium:
    """Return the built-in medium with its per-byte energy constant.

    Raises:
        UnknownMedium: For unrecognised names and for CUSTOM, which has no
            built-in constant.
    """
    if not isinstance(kind, MediumKind):
        kind = parse_medium_kind(kind)
    if kind not in MEDIUM_ENERGY_PER_BYTE:
        raise UnknownMedium(
            "Custom media need an explicit energy_per_byte", error_code="C006")
    return CommMedium(kind, MEDIUM_ENERGY_PER_BYTE[kind])
