"""Node profile registry: one CSV row per node."""

import csv
import logging
from pathlib import Path
from typing import Dict, Union

from dflcarbon.core.exceptions import (
    DuplicateNode,
    MissingColumn,
    ParseError,
    SchemaError,
    UnknownMedium,
    ValidationError,
)
from dflcarbon.core.field_location import FieldLocation
from dflcarbon.core.profiles import (
    GpuProfile,
    HardwareProfile,
    MediumKind,
    NodeProfile,
    REGION_PRESETS,
    RegionProfile,
    ingest_medium,
    parse_medium_kind,
)
from dflcarbon.core.validators import (
    validate_fraction,
    validate_min_int,
    validate_non_negative,
    validate_positive,
    validate_pue,
)

logger = logging.getLogger(__name__)

REGISTRY_COLUMNS = (
    "node_id", "pue", "tdp_watts", "gpu_power_watts", "util_train", "util_agg",
    "region", "grid_ci", "renewable_ratio", "medium", "compute_speed", "agg_speed",
)


def _cell_number(text: str, location: FieldLocation) -> float:
    try:
        return float(text)
    except ValueError:
        raise SchemaError(f"Expected a number, got '{text}'", location=location,
                          error_code="C002")


def _cell_int(text: str, location: FieldLocation) -> int:
    try:
        return int(text)
    except ValueError:
        raise SchemaError(f"Expected an integer, got '{text}'", location=location,
                          error_code="C002")


def parse_registry_row(row: Dict[str, str], location: FieldLocation) -> NodeProfile:
    """Build one NodeProfile from a CSV row; `location` carries the row number."""
    def cell(column: str) -> str:
        return (row.get(column) or "").strip()

    def number(column: str) -> float:
        return _cell_number(cell(column), location.child(column))

    gpu = None
    if cell("gpu_power_watts"):
        gpu = GpuProfile(validate_positive(number("gpu_power_watts"),
                                           location.child("gpu_power_watts")))
    hardware = HardwareProfile(
        pue=validate_pue(number("pue"), location.child("pue")),
        tdp_watts=validate_positive(number("tdp_watts"), location.child("tdp_watts")),
        cpu_utilization_train=validate_fraction(number("util_train"), location.child("util_train")),
        cpu_utilization_agg=validate_fraction(number("util_agg"), location.child("util_agg")),
        gpu=gpu,
    )

    renewable = 0.0
    if cell("renewable_ratio"):
        renewable = validate_fraction(number("renewable_ratio"), location.child("renewable_ratio"))
    region_name = cell("region")
    if cell("grid_ci"):
        ci = validate_non_negative(number("grid_ci"), location.child("grid_ci"))
        region = RegionProfile(region_name, ci, renewable)
    elif region_name.upper() in REGION_PRESETS:
        region = RegionProfile.preset(region_name, renewable)
    else:
        raise ValidationError(f"Region '{region_name}' needs a grid_ci value",
                              location=location.child("grid_ci"), error_code="V011")

    medium_loc = location.child("medium")
    try:
        kind = parse_medium_kind(cell("medium"))
    except UnknownMedium as e:
        raise UnknownMedium(e.message, location=medium_loc, error_code=e.error_code)
    if kind is MediumKind.CUSTOM:
        raise UnknownMedium("Custom media cannot be declared in a registry row",
                            location=medium_loc, error_code="C006")

    return NodeProfile(
        id=validate_min_int(_cell_int(cell("node_id"), location.child("node_id")), 0,
                            location.child("node_id")),
        hardware=hardware,
        region=region,
        medium=ingest_medium(kind),
        compute_speed=validate_positive(number("compute_speed"), location.child("compute_speed")),
        agg_speed=validate_positive(number("agg_speed"), location.child("agg_speed")),
    )


def load_profile_registry(path: Union[str, Path]) -> Dict[int, NodeProfile]:
    """Read a profile registry CSV into {node id: NodeProfile}.

    Rows are numbered from 1 (the first data row) in error locations.

    Raises:
        ParseError: If the file cannot be read
        MissingColumn: If the header lacks a required column
        DuplicateNode: If two rows share a node_id
        ValidationError: If a row violates a profile invariant or ids are not dense
    """
    path = Path(path)
    source = str(path)
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            header = [name.strip() for name in (reader.fieldnames or [])]
            missing = [c for c in REGISTRY_COLUMNS if c not in header]
            if missing:
                raise MissingColumn(f"Missing column(s): {', '.join(missing)}",
                                    location=FieldLocation(source), error_code="C008")
            reader.fieldnames = header
            profiles: Dict[int, NodeProfile] = {}
            for number, row in enumerate(reader, start=1):
                location = FieldLocation(source, row=number)
                profile = parse_registry_row(row, location)
                if profile.id in profiles:
                    raise DuplicateNode(f"Node id {profile.id} appears more than once",
                                        location=location.child("node_id"), error_code="C007")
                profiles[profile.id] = profile
    except (OSError, UnicodeDecodeError, csv.Error) as e:
        raise ParseError(f"Cannot read profile registry: {e}", location=FieldLocation(source),
                         error_code="C003")

    if sorted(profiles) != list(range(len(profiles))):
        raise ValidationError(f"Node ids must be dense 0..{len(profiles) - 1}, "
                              f"got {sorted(profiles)}",
                              location=FieldLocation(source, "node_id"), error_code="V012")
    logger.debug("Loaded %d node profiles from %s", len(profiles), source)
    return profiles


def write_profile_registry(profiles: Dict[int, NodeProfile], path: Union[str, Path]) -> None:
    """Write profiles in registry CSV form (custom media are not representable)."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(REGISTRY_COLUMNS)
        for node_id in sorted(profiles):
            p = profiles[node_id]
            if p.medium.kind is MediumKind.CUSTOM:
                raise UnknownMedium(f"Node {node_id} uses a custom medium", error_code="C006")
            gpu = "" if p.hardware.gpu is None else repr(p.hardware.gpu.power_watts)
            writer.writerow([
                p.id, repr(p.hardware.pue), repr(p.hardware.tdp_watts), gpu,
                repr(p.hardware.cpu_utilization_train), repr(p.hardware.cpu_utilization_agg),
                p.region.name, repr(p.region.grid_carbon_intensity),
                repr(p.region.renewable_ratio), p.medium.kind.value,
                repr(p.compute_speed), repr(p.agg_speed),
            ])
