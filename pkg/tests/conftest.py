"""Shared builders for scenario documents, configs and node profiles."""

import copy
import json
from pathlib import Path

import pytest

from dflcarbon.config import parse_scenario
from dflcarbon.core.profiles import (
    GpuProfile,
    HardwareProfile,
    NodeProfile,
    RegionProfile,
    ingest_medium,
)


def node_document(region="ES", medium="wired", renewable_ratio=0.0, gpu=True,
                  compute_speed=5000, agg_speed=2e7):
    """One replica-style node: 200 W TDP, 70 W GPU, PUE 1.0."""
    hardware = {
        "pue": 1.0,
        "tdp_watts": 200,
        "cpu_utilization_train": 1.0,
        "cpu_utilization_agg": 0.5,
    }
    if gpu:
        hardware["gpu"] = {"power_watts": 70}
    return {
        "hardware": hardware,
        "region": {"name": region, "renewable_ratio": renewable_ratio},
        "medium": medium,
        "compute_speed": compute_speed,
        "agg_speed": agg_speed,
    }


def scenario_document(k=2, rounds=1, **overrides):
    """A small valid scenario; keyword arguments replace top-level fields."""
    document = {
        "schema": 1,
        "name": "test",
        "seed": 1234,
        "rounds": rounds,
        "local_epochs": 1,
        "learning_rate": 0.05,
        "topology": {"kind": "fully_connected"},
        "data": {"classes": 4, "features": 8, "samples_per_node": 40,
                 "partition": {"kind": "iid"}},
        "model": {"hidden_sizes": [8]},
        "aggregation": {"kind": "fedavg"},
        "nodes": [node_document() for _ in range(k)],
    }
    document.update(copy.deepcopy(overrides))
    return document


def make_config(k=2, rounds=1, **overrides):
    return parse_scenario(scenario_document(k, rounds, **overrides), "<test>")


def write_scenario(directory, document, name="scenario.json") -> Path:
    path = Path(directory) / name
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


def make_profile(node_id=0, region=None, medium="wired", gpu_watts=70.0):
    return NodeProfile(
        id=node_id,
        hardware=HardwareProfile(1.0, 200.0, 1.0, 0.5,
                                 GpuProfile(gpu_watts) if gpu_watts else None),
        region=region or RegionProfile.preset("ES"),
        medium=ingest_medium(medium),
        compute_speed=5000.0,
        agg_speed=2e7,
    )


@pytest.fixture
def small_config():
    """Two nodes, fully connected, one round of FedAvg."""
    return make_config()
