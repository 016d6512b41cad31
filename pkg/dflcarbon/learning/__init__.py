"""Desk-scale learning stack: data, partitioning, MLP, evaluation, wire format."""

from dflcarbon.learning.codec import deserialize_model, serialize_model, serialized_length
from dflcarbon.learning.dataset import (
    Dataset,
    generate_dataset,
    load_dataset_csv,
    save_dataset_csv,
    train_test_split,
)
from dflcarbon.learning.metrics import Evaluation, evaluate, macro_f1_score
from dflcarbon.learning.mlp import (
    ModelParams,
    TrainOutcome,
    forward,
    init_params,
    loss_and_gradients,
    mlp_shapes,
    param_count,
    train_local,
)
from dflcarbon.learning.partition import (
    Partition,
    PartitionKind,
    PartitionSpec,
    label_entropy,
    partition,
)

__all__ = [
    'Dataset',
    'Evaluation',
    'ModelParams',
    'Partition',
    'PartitionKind',
    'PartitionSpec',
    'TrainOutcome',
    'deserialize_model',
    'evaluate',
    'forward',
    'generate_dataset',
    'init_params',
    'label_entropy',
    'load_dataset_csv',
    'loss_and_gradients',
    'macro_f1_score',
    'mlp_shapes',
    'param_count',
    'partition',
    'save_dataset_csv',
    'serialize_model',
    'serialized_length',
    'train_local',
    'train_test_split',
]
