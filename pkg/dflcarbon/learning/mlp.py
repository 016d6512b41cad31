"""
Tiny multi-layer perceptron: ReLU hidden layers, softmax output, plain SGD.

Parameters live in one flat float32 vector. Layer l contributes a
rows x cols weight matrix (row-major) followed by a bias of length cols.
All arithmetic runs in float64; results are stored back as float32.
"""

import time
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from dflcarbon.core.exceptions import InvalidArgs, NumericError
from dflcarbon.learning.dataset import Dataset

BATCH_SIZE = 32
INIT_RANGE = 0.1

LayerShape = Tuple[int, int]


def param_count(layer_shapes: Sequence[LayerShape]) -> int:
    """Number of scalars implied by the layer shapes (weights + biases)."""
    return sum(rows * cols + cols for rows, cols in layer_shapes)


@dataclass(frozen=True, eq=False)
class ModelParams:
    """Flat parameter vector of the shared model architecture."""
    layer_shapes: Tuple[LayerShape, ...]
    values: np.ndarray

    def __post_init__(self):
        shapes = tuple((int(r), int(c)) for r, c in self.layer_shapes)
        values = np.array(self.values, dtype=np.float32)
        if values.ndim != 1 or values.size != param_count(shapes):
            raise InvalidArgs(
                f"Expected {param_count(shapes)} values for shapes {shapes}, got {values.size}",
                error_code="L003")
        if not np.all(np.isfinite(values)):
            raise NumericError("Model parameters must be finite", error_code="L004")
        values.setflags(write=False)
        object.__setattr__(self, "layer_shapes", shapes)
        object.__setattr__(self, "values", values)

    @property
    def size(self) -> int:
        return int(self.values.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModelParams):
            return NotImplemented
        return (self.layer_shapes == other.layer_shapes
                and np.array_equal(self.values, other.values))

    __hash__ = None


def mlp_shapes(features: int, hidden_sizes: Sequence[int], classes: int) -> Tuple[LayerShape, ...]:
    """Layer shapes for features -> hidden... -> classes."""
    widths = [features, *hidden_sizes, classes]
    return tuple((widths[i], widths[i + 1]) for i in range(len(widths) - 1))


def init_params(layer_shapes: Sequence[LayerShape], seed: int) -> ModelParams:
    """Uniform initialisation in [-0.1, 0.1]."""
    rng = np.random.default_rng(seed)
    size = param_count(layer_shapes)
    return ModelParams(tuple(layer_shapes), rng.uniform(-INIT_RANGE, INIT_RANGE, size))


def _unpack(values: np.ndarray, layer_shapes: Sequence[LayerShape]):
    layers, offset = [], 0
    for rows, cols in layer_shapes:
        weights = values[offset:offset + rows * cols].reshape(rows, cols)
        offset += rows * cols
        bias = values[offset:offset + cols]
        offset += cols
        layers.append((weights, bias))
    return layers


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def forward(values: np.ndarray, layer_shapes: Sequence[LayerShape], x: np.ndarray) -> np.ndarray:
    """Class probabilities for every row of x."""
    activation = np.asarray(x, dtype=np.float64)
    layers = _unpack(np.asarray(values, dtype=np.float64), layer_shapes)
    for index, (weights, bias) in enumerate(layers):
        activation = activation @ weights + bias
        if index < len(layers) - 1:
            activation = np.maximum(activation, 0.0)
    return _softmax(activation)


def cross_entropy(probs: np.ndarray, labels: np.ndarray) -> float:
    """Mean negative log-likelihood of the true labels."""
    picked = probs[np.arange(labels.size), labels]
    return float(-np.log(np.maximum(picked, 1e-300)).mean())


def loss_and_gradients(values: np.ndarray, layer_shapes: Sequence[LayerShape],
                       x: np.ndarray, y: np.ndarray) -> Tuple[float, np.ndarray]:
    """Mean cross-entropy over the batch and its gradient (flat, float64)."""
    values = np.asarray(values, dtype=np.float64)
    layers = _unpack(values, layer_shapes)
    activations: List[np.ndarray] = [np.asarray(x, dtype=np.float64)]
    pre_activations: List[np.ndarray] = []
    for index, (weights, bias) in enumerate(layers):
        z = activations[-1] @ weights + bias
        pre_activations.append(z)
        activations.append(np.maximum(z, 0.0) if index < len(layers) - 1 else z)

    probs = _softmax(activations[-1])
    n = y.size
    loss = cross_entropy(probs, y)

    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    delta /= n

    grads: List[np.ndarray] = [None] * len(layers)
    for index in range(len(layers) - 1, -1, -1):
        weights, _ = layers[index]
        grad_w = activations[index].T @ delta
        grad_b = delta.sum(axis=0)
        grads[index] = np.concatenate([grad_w.ravel(), grad_b])
        if index > 0:
            delta = (delta @ weights.T) * (pre_activations[index - 1] > 0)
    return loss, np.concatenate(grads)


@dataclass(frozen=True, eq=False)
class TrainOutcome:
    """Result of one node's local training."""
    params: ModelParams
    samples_processed: int
    wall_seconds: float
    train_loss: float


def train_local(params: ModelParams, shard: Dataset, epochs: int, lr: float,
                seed: int) -> TrainOutcome:
    """Run `epochs` passes of mini-batch SGD over the shard.

    Batches hold 32 samples (the last one may be partial); the sample order
    is reshuffled every epoch from a PRNG seeded with `seed`.

    Raises:
        InvalidArgs: If the shard is empty, lr <= 0 or epochs < 0
        NumericError: If the loss becomes non-finite
    """
    if len(shard) == 0:
        raise InvalidArgs("Cannot train on an empty shard", error_code="L005")
    if not lr > 0:
        raise InvalidArgs(f"Learning rate must be > 0, got {lr}", error_code="L005")
    if epochs < 0:
        raise InvalidArgs(f"Epochs must be >= 0, got {epochs}", error_code="L005")
    if epochs == 0:
        return TrainOutcome(params, 0, 0.0, 0.0)

    started = time.perf_counter()
    rng = np.random.default_rng(seed)
    values = params.values.astype(np.float64)
    n = len(shard)
    epoch_loss = 0.0
    for _ in range(epochs):
        order = rng.permutation(n)
        weighted_loss = 0.0
        for start in range(0, n, BATCH_SIZE):
            batch = order[start:start + BATCH_SIZE]
            loss, grad = loss_and_gradients(values, params.layer_shapes,
                                            shard.features[batch], shard.labels[batch])
            if not np.isfinite(loss) or not np.all(np.isfinite(grad)):
                raise NumericError(
                    f"Training diverged (loss={loss}); try a smaller learning rate",
                    error_code="L004")
            values -= lr * grad
            weighted_loss += loss * batch.size
        epoch_loss = weighted_loss / n

    if not np.all(np.isfinite(values.astype(np.float32))):
        raise NumericError("Training produced non-finite parameters", error_code="L004")
    return TrainOutcome(
        params=ModelParams(params.layer_shapes, values.astype(np.float32)),
        samples_processed=n * epochs,
        wall_seconds=time.perf_counter() - started,
        train_loss=float(epoch_loss),
    )
