"""Model aggregation strategies: FedAvg, Krum and emission-threshold averaging."""

from dflcarbon.aggregation.strategies import (
    AggregationKind,
    AggregationSpec,
    NeighborUpdate,
    SelectiveResult,
    aggregation_work,
    fedavg,
    green_sa,
    krum,
    krum_scores,
    percentile_threshold,
)

__all__ = [
    'AggregationKind',
    'AggregationSpec',
    'NeighborUpdate',
    'SelectiveResult',
    'aggregation_work',
    'fedavg',
    'green_sa',
    'krum',
    'krum_scores',
    'percentile_threshold',
]
