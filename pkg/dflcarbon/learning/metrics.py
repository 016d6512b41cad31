"""Held-out evaluation: macro-F1, accuracy and cross-entropy loss."""

from dataclasses import dataclass

import numpy as np

from dflcarbon.core.exceptions import InvalidArgs
from dflcarbon.learning.dataset import Dataset
from dflcarbon.learning.mlp import ModelParams, cross_entropy, forward


@dataclass(frozen=True)
class Evaluation:
    macro_f1: float
    loss: float
    accuracy: float


def macro_f1_score(labels: np.ndarray, predictions: np.ndarray, classes: int) -> float:
    """Unweighted mean of per-class F1 over all `classes`.

    A class with no true samples scores 0 and still counts in the mean.
    """
    scores = []
    for c in range(classes):
        actual = labels == c
        predicted = predictions == c
        tp = int(np.sum(actual & predicted))
        fp = int(np.sum(~actual & predicted))
        fn = int(np.sum(actual & ~predicted))
        if not actual.any():
            scores.append(0.0)
            continue
        denominator = 2 * tp + fp + fn
        scores.append(2 * tp / denominator if denominator else 0.0)
    return float(np.mean(scores))


def evaluate(params: ModelParams, data: Dataset) -> Evaluation:
    """Score a model on a dataset.

    Raises:
        InvalidArgs: If data is empty
    """
    if len(data) == 0:
        raise InvalidArgs("Cannot evaluate on an empty dataset", error_code="L006")
    probs = forward(params.values, params.layer_shapes, data.features)
    predictions = probs.argmax(axis=1)
    classes = params.layer_shapes[-1][1]
    return Evaluation(
        macro_f1=macro_f1_score(data.labels, predictions, classes),
        loss=cross_entropy(probs, data.labels),
        accuracy=float(np.mean(predictions == data.labels)),
    )
