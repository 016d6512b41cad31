"""Phase durations: derived from workload under the modeled clock."""

from typing import NamedTuple

from dflcarbon.config.scenario import ClockMode
from dflcarbon.core.profiles import NodeProfile


class Durations(NamedTuple):
    train_s: float
    agg_s: float


def modeled_durations(profile: NodeProfile, samples_processed: int,
                      params_aggregated: int) -> Durations:
    """Seconds for training and aggregation at the node's declared throughput."""
    return Durations(samples_processed / profile.compute_speed,
                     params_aggregated / profile.agg_speed)


def phase_durations(mode: ClockMode, profile: NodeProfile, samples_processed: int,
                    params_aggregated: int, train_wall_s: float = 0.0,
                    agg_wall_s: float = 0.0) -> Durations:
    """Durations under `mode`; the measured clock reports wall time instead."""
    if mode is ClockMode.MEASURED:
        return Durations(train_wall_s, agg_wall_s)
    return modeled_durations(profile, samples_processed, params_aggregated)
