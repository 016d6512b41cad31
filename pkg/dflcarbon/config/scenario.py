"""
Scenario configuration: types, JSON loading with validation, canonical dump.

The JSON schema is documented in docs/scenario.md. Loading is all-or-nothing:
either a fully validated ScenarioConfig comes back or exactly one
ConfigError subclass is raised, naming the offending field.
"""

import hashlib
import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from dflcarbon.aggregation.strategies import AggregationKind, AggregationSpec
from dflcarbon.core.exceptions import (
    DuplicateNode,
    InvalidSpec,
    ParseError,
    SchemaError,
    UnknownMedium,
    ValidationError,
)
from dflcarbon.core.field_location import FieldLocation
from dflcarbon.core.profiles import (
    CommMedium,
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
    require_field,
    validate_fraction,
    validate_integer,
    validate_min_int,
    validate_non_negative,
    validate_number,
    validate_open_interval,
    validate_positive,
    validate_pue,
    validate_seed,
    validate_string,
)
from dflcarbon.learning.partition import PartitionKind, PartitionSpec
from dflcarbon.selection.voting import SelectionKind
from dflcarbon.topology.topology import TopologyKind, TopologySpec, build_topology

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
DEFAULT_LEARNING_RATE = 0.05


class ClockMode(Enum):
    MODELED = "modeled"
    MEASURED = "measured"


@dataclass(frozen=True)
class DataSpec:
    classes: int
    features: int
    samples_per_node: int
    partition: PartitionSpec


@dataclass(frozen=True)
class ModelSpec:
    hidden_sizes: Tuple[int, ...] = ()


@dataclass(frozen=True)
class EarlyStoppingSpec:
    patience: int
    min_delta: float = 0.0


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete, validated description of one experiment."""
    nodes: Tuple[NodeProfile, ...]
    topology: TopologySpec
    rounds: int
    local_epochs: int
    data: DataSpec
    model: ModelSpec
    aggregation: AggregationSpec
    seed: int
    selection: SelectionKind = SelectionKind.NONE
    clock: ClockMode = ClockMode.MODELED
    early_stopping: Optional[EarlyStoppingSpec] = None
    learning_rate: float = DEFAULT_LEARNING_RATE
    name: str = "scenario"

    @property
    def k(self) -> int:
        return len(self.nodes)


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

def _enum_value(enum_cls, value: Any, location: FieldLocation, error_code: str = "V011"):
    text = validate_string(value, location).strip().lower()
    try:
        return enum_cls(text)
    except ValueError:
        choices = ", ".join(member.value for member in enum_cls)
        raise ValidationError(f"Unknown value '{value}' (expected one of: {choices})",
                              location=location, error_code=error_code)


def _kind_of(document: Any, location: FieldLocation) -> Tuple[str, Dict[str, Any]]:
    """Accept either "name" or {"kind": "name", ...}."""
    if isinstance(document, str):
        return document.strip().lower(), {}
    kind = validate_string(require_field(document, "kind", location), location.child("kind"))
    return kind.strip().lower(), document


def parse_hardware(document: Any, location: FieldLocation) -> HardwareProfile:
    gpu = None
    gpu_doc = document.get("gpu") if isinstance(document, dict) else None
    if gpu_doc is not None:
        gpu_loc = location.child("gpu")
        gpu = GpuProfile(validate_positive(require_field(gpu_doc, "power_watts", gpu_loc),
                                           gpu_loc.child("power_watts")))
    return HardwareProfile(
        pue=validate_pue(require_field(document, "pue", location), location.child("pue")),
        tdp_watts=validate_positive(require_field(document, "tdp_watts", location),
                                    location.child("tdp_watts")),
        cpu_utilization_train=validate_fraction(
            require_field(document, "cpu_utilization_train", location),
            location.child("cpu_utilization_train")),
        cpu_utilization_agg=validate_fraction(
            require_field(document, "cpu_utilization_agg", location),
            location.child("cpu_utilization_agg")),
        gpu=gpu,
    )


def parse_region(document: Any, location: FieldLocation) -> RegionProfile:
    if isinstance(document, str):
        if document.upper() not in REGION_PRESETS:
            raise ValidationError(f"Unknown region preset '{document}'",
                                  location=location, error_code="V011")
        return RegionProfile.preset(document)
    name = validate_string(require_field(document, "name", location), location.child("name"))
    renewable = validate_fraction(document.get("renewable_ratio", 0.0),
                                  location.child("renewable_ratio"))
    if "grid_carbon_intensity" not in document and name.upper() in REGION_PRESETS:
        return RegionProfile.preset(name, renewable)
    ci = validate_non_negative(require_field(document, "grid_carbon_intensity", location),
                               location.child("grid_carbon_intensity"))
    return RegionProfile(name, ci, renewable)


def parse_medium(document: Any, location: FieldLocation) -> CommMedium:
    kind_name, body = _kind_of(document, location)
    try:
        kind = parse_medium_kind(kind_name)
    except UnknownMedium as e:
        raise UnknownMedium(e.message, location=location, error_code=e.error_code)
    if kind is MediumKind.CUSTOM:
        energy = validate_positive(require_field(body, "energy_per_byte", location),
                                   location.child("energy_per_byte"))
        return CommMedium(kind, energy)
    return ingest_medium(kind)


def parse_node(document: Any, index: int, location: FieldLocation) -> NodeProfile:
    if not isinstance(document, dict):
        raise SchemaError("Expected a node object", location=location, error_code="C002")
    node_id = validate_min_int(document.get("id", index), 0, location.child("id"))
    return NodeProfile(
        id=node_id,
        hardware=parse_hardware(require_field(document, "hardware", location),
                                location.child("hardware")),
        region=parse_region(require_field(document, "region", location),
                            location.child("region")),
        medium=parse_medium(require_field(document, "medium", location),
                            location.child("medium")),
        compute_speed=validate_positive(require_field(document, "compute_speed", location),
                                        location.child("compute_speed")),
        agg_speed=validate_positive(require_field(document, "agg_speed", location),
                                    location.child("agg_speed")),
    )


def check_node_ids(nodes, location: FieldLocation) -> Tuple[NodeProfile, ...]:
    """Reject duplicates and gaps; return nodes sorted by id."""
    seen = {}
    for index, node in enumerate(nodes):
        if node.id in seen:
            raise DuplicateNode(f"Node id {node.id} appears more than once",
                                location=location.child(index).child("id"), error_code="C007")
        seen[node.id] = node
    if sorted(seen) != list(range(len(seen))):
        raise ValidationError(f"Node ids must be dense 0..{len(seen) - 1}, got {sorted(seen)}",
                              location=location, error_code="V012")
    return tuple(seen[i] for i in range(len(seen)))


def parse_topology(document: Any, location: FieldLocation) -> TopologySpec:
    kind_name, body = _kind_of(document, location)
    aliases = {"fc": "fully_connected", "er": "erdos_renyi"}
    kind = _enum_value(TopologyKind, aliases.get(kind_name, kind_name), location.child("kind")
                       if body else location)
    if kind is TopologyKind.ERDOS_RENYI:
        p = validate_number(require_field(body, "p", location), location.child("p"))
        if not 0.0 < p <= 1.0:
            raise ValidationError(f"Edge probability must lie in (0, 1], got {p}",
                                  location=location.child("p"), error_code="V005")
        return TopologySpec(kind, p)
    return TopologySpec(kind)


def parse_partition(document: Any, location: FieldLocation) -> PartitionSpec:
    kind_name, body = _kind_of(document, location)
    kind = _enum_value(PartitionKind, kind_name, location)
    if kind is PartitionKind.DIRICHLET:
        alpha = validate_positive(require_field(body, "alpha", location), location.child("alpha"))
        return PartitionSpec(kind, alpha)
    return PartitionSpec(kind)


def parse_data(document: Any, location: FieldLocation) -> DataSpec:
    classes = validate_min_int(require_field(document, "classes", location), 2,
                               location.child("classes"))
    features = validate_min_int(require_field(document, "features", location), 1,
                                location.child("features"))
    samples = validate_min_int(require_field(document, "samples_per_node", location), classes,
                               location.child("samples_per_node"))
    partition = parse_partition(document.get("partition", "iid"), location.child("partition"))
    return DataSpec(classes, features, samples, partition)


def parse_model(document: Any, location: FieldLocation) -> ModelSpec:
    hidden_loc = location.child("hidden_sizes")
    hidden = require_field(document, "hidden_sizes", location)
    if not isinstance(hidden, list):
        raise SchemaError("Expected a list of layer widths", location=hidden_loc,
                          error_code="C002")
    return ModelSpec(tuple(validate_min_int(width, 1, hidden_loc.child(i))
                           for i, width in enumerate(hidden)))


def parse_aggregation(document: Any, location: FieldLocation) -> AggregationSpec:
    kind_name, body = _kind_of(document, location)
    kind = _enum_value(AggregationKind, kind_name, location)
    if kind is AggregationKind.KRUM:
        return AggregationSpec(kind, f=validate_min_int(body.get("f", 0), 0, location.child("f")))
    if kind is AggregationKind.GREEN_SA:
        has_thresh, has_pct = "c_thresh" in body, "percentile" in body
        if has_thresh == has_pct:
            raise SchemaError("green_sa needs exactly one of 'c_thresh' or 'percentile'",
                              location=location, error_code="C001")
        if has_thresh:
            return AggregationSpec(kind, c_thresh=validate_positive(
                body["c_thresh"], location.child("c_thresh")))
        return AggregationSpec(kind, percentile=validate_open_interval(
            body["percentile"], 0.0, 100.0, location.child("percentile")))
    return AggregationSpec(kind)


def parse_early_stopping(document: Any, location: FieldLocation) -> EarlyStoppingSpec:
    return EarlyStoppingSpec(
        patience=validate_min_int(require_field(document, "patience", location), 1,
                                  location.child("patience")),
        min_delta=validate_non_negative(document.get("min_delta", 0.0),
                                        location.child("min_delta")),
    )


def check_krum_feasible(config: ScenarioConfig, location: FieldLocation) -> None:
    """Every node must see at least 2f + 3 candidates (itself plus neighbors)."""
    if config.aggregation.kind is not AggregationKind.KRUM:
        return
    topology = build_topology(config.topology, config.k, config.seed)
    needed = 2 * config.aggregation.f + 3
    for node in range(config.k):
        if topology.degree(node) + 1 < needed:
            raise ValidationError(
                f"Krum with f={config.aggregation.f} needs {needed} candidates per node; "
                f"node {node} has {topology.degree(node) + 1}",
                location=location.child("aggregation").child("f"), error_code="V014")


def parse_scenario(document: Any, source: str = "<scenario>",
                   base_dir: Optional[Path] = None) -> ScenarioConfig:
    """Validate a decoded scenario document.

    Raises:
        SchemaError: Missing or mistyped field
        ValidationError: Invariant violated
        ConfigError: Any other configuration problem
    """
    root = FieldLocation(source)
    if not isinstance(document, dict):
        raise SchemaError("Scenario must be a JSON object", location=root, error_code="C002")
    schema = validate_integer(require_field(document, "schema", root), root.child("schema"))
    if schema != SCHEMA_VERSION:
        raise ValidationError(f"Unsupported schema version {schema} (expected {SCHEMA_VERSION})",
                              location=root.child("schema"), error_code="V015")

    if "profile_registry" in document and "nodes" in document:
        raise SchemaError("Give either inline nodes or a profile_registry, not both",
                          location=root.child("profile_registry"), error_code="C009")
    if "profile_registry" in document:
        from dflcarbon.config.registry import load_profile_registry

        reg_loc = root.child("profile_registry")
        reg_path = Path(validate_string(document["profile_registry"], reg_loc))
        if not reg_path.is_absolute() and base_dir is not None:
            reg_path = base_dir / reg_path
        registry = load_profile_registry(reg_path)
        nodes = tuple(registry[i] for i in sorted(registry))
    else:
        nodes_loc = root.child("nodes")
        raw_nodes = require_field(document, "nodes", root)
        if not isinstance(raw_nodes, list):
            raise SchemaError("Expected a list of nodes", location=nodes_loc, error_code="C002")
        nodes = check_node_ids(
            [parse_node(n, i, nodes_loc.child(i)) for i, n in enumerate(raw_nodes)], nodes_loc)
    if len(nodes) < 2:
        raise ValidationError(f"A federation needs at least 2 nodes, got {len(nodes)}",
                              location=root.child("nodes"), error_code="V004")

    early = document.get("early_stopping")
    config = ScenarioConfig(
        nodes=nodes,
        topology=parse_topology(require_field(document, "topology", root), root.child("topology")),
        rounds=validate_min_int(require_field(document, "rounds", root), 1, root.child("rounds")),
        local_epochs=validate_min_int(require_field(document, "local_epochs", root), 1,
                                      root.child("local_epochs")),
        data=parse_data(require_field(document, "data", root), root.child("data")),
        model=parse_model(require_field(document, "model", root), root.child("model")),
        aggregation=parse_aggregation(require_field(document, "aggregation", root),
                                      root.child("aggregation")),
        seed=validate_seed(require_field(document, "seed", root), root.child("seed")),
        selection=_enum_value(SelectionKind, document.get("selection", "none"),
                              root.child("selection")),
        clock=_enum_value(ClockMode, document.get("clock", "modeled"), root.child("clock")),
        early_stopping=(parse_early_stopping(early, root.child("early_stopping"))
                        if early is not None else None),
        learning_rate=validate_positive(document.get("learning_rate", DEFAULT_LEARNING_RATE),
                                        root.child("learning_rate")),
        name=validate_string(document.get("name", Path(source).stem or "scenario"),
                             root.child("name")),
    )
    try:
        check_krum_feasible(config, root)
    except InvalidSpec as e:
        raise ValidationError(e.message, location=root.child("topology"), error_code="V016")
    return config


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """Read and validate a scenario JSON file.

    Raises:
        ParseError: File unreadable or not valid UTF-8 JSON
        SchemaError: Missing or mistyped field (with field path)
        ValidationError: Invariant violated (with field path)
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ParseError(f"Cannot read scenario: {e}", location=FieldLocation(str(path)),
                         error_code="C003")
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"Malformed JSON at line {e.lineno} column {e.colno}: {e.msg}",
                         location=FieldLocation(str(path)), error_code="C004")
    except (ValueError, RecursionError) as e:
        # int literals past the interpreter's digit limit, absurd nesting
        raise ParseError(f"Malformed JSON: {e}", location=FieldLocation(str(path)),
                         error_code="C004")
    config = parse_scenario(document, str(path), path.parent)
    logger.info("Loaded scenario %s: K=%d rounds=%d", config.name, config.k, config.rounds)
    return config


# --------------------------------------------------------------------------
# Canonical serialisation
# --------------------------------------------------------------------------

def _medium_to_json(medium: CommMedium) -> Union[str, Dict[str, Any]]:
    if medium.kind is MediumKind.CUSTOM:
        return {"kind": "custom", "energy_per_byte": medium.energy_per_byte}
    return medium.kind.value


def node_to_dict(node: NodeProfile) -> Dict[str, Any]:
    hardware = {
        "pue": node.hardware.pue,
        "tdp_watts": node.hardware.tdp_watts,
        "cpu_utilization_train": node.hardware.cpu_utilization_train,
        "cpu_utilization_agg": node.hardware.cpu_utilization_agg,
    }
    if node.hardware.gpu is not None:
        hardware["gpu"] = {"power_watts": node.hardware.gpu.power_watts}
    return {
        "id": node.id,
        "hardware": hardware,
        "region": {
            "name": node.region.name,
            "grid_carbon_intensity": node.region.grid_carbon_intensity,
            "renewable_ratio": node.region.renewable_ratio,
        },
        "medium": _medium_to_json(node.medium),
        "compute_speed": node.compute_speed,
        "agg_speed": node.agg_speed,
    }


def to_dict(config: ScenarioConfig) -> Dict[str, Any]:
    """JSON-ready dict that parse_scenario maps back to an equal config."""
    topology: Dict[str, Any] = {"kind": config.topology.kind.value}
    if config.topology.p is not None:
        topology["p"] = config.topology.p
    partition: Dict[str, Any] = {"kind": config.data.partition.kind.value}
    if config.data.partition.alpha is not None:
        partition["alpha"] = config.data.partition.alpha
    aggregation: Dict[str, Any] = {"kind": config.aggregation.kind.value}
    if config.aggregation.kind is AggregationKind.KRUM:
        aggregation["f"] = config.aggregation.f
    if config.aggregation.c_thresh is not None:
        aggregation["c_thresh"] = config.aggregation.c_thresh
    if config.aggregation.percentile is not None:
        aggregation["percentile"] = config.aggregation.percentile

    document: Dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "name": config.name,
        "seed": config.seed,
        "rounds": config.rounds,
        "local_epochs": config.local_epochs,
        "learning_rate": config.learning_rate,
        "topology": topology,
        "data": {
            "classes": config.data.classes,
            "features": config.data.features,
            "samples_per_node": config.data.samples_per_node,
            "partition": partition,
        },
        "model": {"hidden_sizes": list(config.model.hidden_sizes)},
        "aggregation": aggregation,
        "selection": config.selection.value,
        "clock": config.clock.value,
        "nodes": [node_to_dict(n) for n in config.nodes],
    }
    if config.early_stopping is not None:
        document["early_stopping"] = {
            "patience": config.early_stopping.patience,
            "min_delta": config.early_stopping.min_delta,
        }
    return document


def canonical_json(config: ScenarioConfig) -> str:
    """Deterministic JSON text (sorted keys, no whitespace)."""
    return json.dumps(to_dict(config), sort_keys=True, separators=(",", ":"))


def dump_scenario(config: ScenarioConfig, path: Union[str, Path]) -> None:
    """Write a scenario file that load_scenario reads back to an equal config."""
    Path(path).write_text(json.dumps(to_dict(config), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def scenario_fingerprint(config: ScenarioConfig) -> str:
    """Hex digest identifying (canonical config, seed); stable across platforms."""
    hasher = hashlib.sha256()
    hasher.update(f"schema{SCHEMA_VERSION}".encode("utf-8"))
    hasher.update(b"\0")
    hasher.update(canonical_json(config).encode("utf-8"))
    hasher.update(b"\0")
    hasher.update(str(config.seed).encode("utf-8"))
    return hasher.hexdigest()
