"""Single-parameter scenario variants used by parameter sweeps."""

from dataclasses import replace
from typing import Callable, Dict, List, Tuple

from dflcarbon.core.exceptions import ConfigError, DflCarbonError, ValidationError
from dflcarbon.core.field_location import FieldLocation
from dflcarbon.core.profiles import GpuProfile, RegionProfile, ingest_medium
from dflcarbon.config.scenario import (
    ScenarioConfig,
    parse_aggregation,
    parse_partition,
    parse_scenario,
    to_dict,
)
from dflcarbon.selection.voting import SelectionKind
from dflcarbon.topology.topology import TopologySpec

SWEEP_SOURCE = "<sweep>"


def parse_vary(text: str) -> Tuple[str, List[str]]:
    """Split 'param=v1,v2,...' into the parameter and its values.

    Raises:
        ValidationError: If the text has no '=' or no values
    """
    param, sep, values = text.partition("=")
    choices = [v.strip() for v in values.split(",") if v.strip()]
    if not sep or not param.strip() or not choices:
        raise ValidationError(f"Expected <param>=<v1,v2,...>, got '{text}'",
                              location=FieldLocation("--vary"), error_code="V013")
    return param.strip().lower(), choices


def _spec_argument(value: str) -> Dict[str, str]:
    """'krum:1' -> {'kind': 'krum', 'arg': '1'}."""
    kind, _, arg = value.partition(":")
    return {"kind": kind.strip().lower(), "arg": arg.strip()}


def _aggregation(config: ScenarioConfig, value: str) -> ScenarioConfig:
    parts = _spec_argument(value)
    document: Dict[str, object] = {"kind": parts["kind"]}
    arg = parts["arg"]
    if parts["kind"] == "krum":
        document["f"] = int(arg) if arg else 0
    elif parts["kind"] == "green_sa":
        if arg.lower().startswith("p"):
            document["percentile"] = float(arg[1:])
        else:
            document["c_thresh"] = float(arg) if arg else 0.0
    return replace(config, aggregation=parse_aggregation(document, FieldLocation(SWEEP_SOURCE,
                                                                                 "aggregation")))


def _partition(config: ScenarioConfig, value: str) -> ScenarioConfig:
    parts = _spec_argument(value)
    document: Dict[str, object] = {"kind": parts["kind"]}
    if parts["arg"]:
        document["alpha"] = float(parts["arg"])
    spec = parse_partition(document, FieldLocation(SWEEP_SOURCE, "data.partition"))
    return replace(config, data=replace(config.data, partition=spec))


def _nodes(config: ScenarioConfig, value: str) -> ScenarioConfig:
    k = int(value)
    if k < 2:
        raise ValidationError(f"A federation needs at least 2 nodes, got {k}",
                              location=FieldLocation(SWEEP_SOURCE, "nodes"), error_code="V004")
    base = config.nodes
    return replace(config, nodes=tuple(replace(base[i % len(base)], id=i) for i in range(k)))


def _each_node(config: ScenarioConfig, update: Callable) -> ScenarioConfig:
    return replace(config, nodes=tuple(update(node) for node in config.nodes))


def _gpu(config: ScenarioConfig, value: str) -> ScenarioConfig:
    """'none' strips the accelerator from every node; a number declares its watts."""
    text = value.strip().lower()
    gpu = None if text in ("none", "off", "cpu") else GpuProfile(float(text))
    return _each_node(config, lambda n: replace(n, hardware=replace(n.hardware, gpu=gpu)))


def _hidden_sizes(config: ScenarioConfig, value: str) -> ScenarioConfig:
    """'32x16' gives two hidden layers; 'none' gives softmax regression."""
    text = value.strip().lower()
    sizes = () if text in ("none", "0") else tuple(int(w) for w in text.split("x"))
    return replace(config, model=replace(config.model, hidden_sizes=sizes))


OVERRIDES: Dict[str, Callable[[ScenarioConfig, str], ScenarioConfig]] = {
    "medium": lambda c, v: _each_node(c, lambda n: replace(n, medium=ingest_medium(v))),
    "region": lambda c, v: _each_node(c, lambda n: replace(
        n, region=RegionProfile.preset(v, n.region.renewable_ratio))),
    "renewable_ratio": lambda c, v: _each_node(c, lambda n: replace(
        n, region=replace(n.region, renewable_ratio=float(v)))),
    "topology": lambda c, v: replace(c, topology=TopologySpec.parse(v)),
    "nodes": _nodes,
    "aggregation": _aggregation,
    "selection": lambda c, v: replace(c, selection=SelectionKind(v.strip().lower())),
    "gpu": _gpu,
    "hidden_sizes": _hidden_sizes,
    "partition": _partition,
    "rounds": lambda c, v: replace(c, rounds=int(v)),
    "local_epochs": lambda c, v: replace(c, local_epochs=int(v)),
    "seed": lambda c, v: replace(c, seed=int(v)),
}


def apply_override(config: ScenarioConfig, param: str, value: str) -> ScenarioConfig:
    """Return a copy of `config` with one parameter replaced, fully revalidated.

    Raises:
        ValidationError: Unknown parameter or unusable value
        ConfigError: The variant violates a scenario invariant
    """
    handler = OVERRIDES.get(param)
    location = FieldLocation("--vary", param)
    if handler is None:
        raise ValidationError(
            f"Cannot vary '{param}' (supported: {', '.join(sorted(OVERRIDES))})",
            location=location, error_code="V013")
    try:
        variant = handler(config, value)
    except ConfigError:
        raise
    except (DflCarbonError, ValueError) as e:
        raise ValidationError(f"Bad value '{value}': {e}", location=location,
                              error_code="V013")
    # Round trip through the loader so every invariant is rechecked.
    return parse_scenario(to_dict(variant), SWEEP_SOURCE)
