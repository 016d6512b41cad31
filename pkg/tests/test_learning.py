"""Tests for data generation, partitioning, the MLP and the model codec."""

import tempfile
from pathlib import Path

import numpy as np
import pytest

from dflcarbon.core.exceptions import (
    BadMagic,
    InvalidArgs,
    LengthMismatch,
    NumericError,
    VersionMismatch,
)
from dflcarbon.learning import (
    Dataset,
    ModelParams,
    PartitionKind,
    PartitionSpec,
    deserialize_model,
    evaluate,
    forward,
    generate_dataset,
    init_params,
    label_entropy,
    load_dataset_csv,
    loss_and_gradients,
    macro_f1_score,
    mlp_shapes,
    param_count,
    partition,
    save_dataset_csv,
    serialize_model,
    serialized_length,
    train_local,
    train_test_split,
)

IID = PartitionSpec(PartitionKind.IID)


def separated_blobs(samples=200, seed=0):
    """Two well separated 2-D blobs centred at (-2, -2) and (2, 2)."""
    rng = np.random.default_rng(seed)
    half = samples // 2
    features = np.vstack([
        np.array([-2.0, -2.0]) + 0.7 * rng.standard_normal((half, 2)),
        np.array([2.0, 2.0]) + 0.7 * rng.standard_normal((samples - half, 2)),
    ])
    labels = np.array([0] * half + [1] * (samples - half), dtype=np.int64)
    return Dataset(features, labels, 2)


class TestGenerateDataset:
    """Test synthetic blob generation."""

    def test_class_counts_remainder_rule(self):
        data = generate_dataset(3, 2, 10, seed=0)
        assert tuple(data.class_counts()) == (4, 3, 3)
        assert data.features.shape == (10, 2)

    def test_deterministic(self):
        first = generate_dataset(4, 8, 100, seed=5)
        second = generate_dataset(4, 8, 100, seed=5)
        assert np.array_equal(first.features, second.features)
        assert np.array_equal(first.labels, second.labels)

    @pytest.mark.parametrize("seed", range(5))
    def test_nearest_class_mean_separates_blobs(self, seed):
        data = generate_dataset(4, 8, 2000, seed=seed)
        means = np.stack([data.features[data.labels == c].mean(axis=0) for c in range(4)])
        distances = ((data.features[:, None, :] - means[None, :, :]) ** 2).sum(axis=2)
        assert np.mean(distances.argmin(axis=1) == data.labels) >= 0.9

    @pytest.mark.parametrize("args", [(1, 2, 10), (2, 0, 10), (4, 2, 3)])
    def test_invalid_arguments(self, args):
        with pytest.raises(InvalidArgs) as exc:
            generate_dataset(*args, seed=0)
        assert exc.value.error_code == "L001"

    def test_train_test_split_disjoint(self):
        data = generate_dataset(2, 2, 50, seed=1)
        train, test = train_test_split(data, 10, seed=1)
        assert len(train) == 40
        assert len(test) == 10
        assert sorted(np.concatenate([train.labels, test.labels]).tolist()) == \
            sorted(data.labels.tolist())

    def test_csv_round_trip(self):
        data = generate_dataset(3, 4, 30, seed=2)
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "data.csv"
            save_dataset_csv(data, path)
            loaded = load_dataset_csv(path, 3)
        assert np.array_equal(loaded.features, data.features)
        assert np.array_equal(loaded.labels, data.labels)


class TestPartition:
    """Test IID and Dirichlet partitioning."""

    def test_iid_equal_shards(self):
        data = generate_dataset(4, 2, 100, seed=0)
        result = partition(data, 10, IID, seed=0)
        assert result.sizes() == (10,) * 10

    def test_iid_remainder_to_low_ids(self):
        data = generate_dataset(2, 2, 23, seed=0)
        assert partition(data, 4, IID, seed=0).sizes() == (6, 6, 6, 5)

    @pytest.mark.parametrize("spec", [IID, PartitionSpec(PartitionKind.DIRICHLET, 0.1)])
    def test_disjoint_cover(self, spec):
        data = generate_dataset(5, 2, 300, seed=3)
        result = partition(data, 7, spec, seed=3)
        everything = np.concatenate(result.shards)
        assert sorted(everything.tolist()) == list(range(300))
        assert all(size > 0 for size in result.sizes())

    def test_dirichlet_large_alpha_matches_global(self):
        data = generate_dataset(4, 2, 8000, seed=4)
        result = partition(data, 4, PartitionSpec(PartitionKind.DIRICHLET, 1e6), seed=4)
        global_hist = data.class_counts() / len(data)
        for shard in result.shards:
            node_hist = np.bincount(data.labels[shard], minlength=4) / shard.size
            assert np.all(np.abs(node_hist - global_hist) < 0.05)

    def test_dirichlet_small_alpha_skews_labels(self):
        """Mean per-node label entropy at alpha=0.1 is under half the IID value."""
        skewed, iid = [], []
        dirichlet = PartitionSpec(PartitionKind.DIRICHLET, 0.1)
        for seed in range(20):
            data = generate_dataset(10, 2, 5000, seed=seed)
            for spec, bucket in ((dirichlet, skewed), (IID, iid)):
                result = partition(data, 10, spec, seed=seed)
                bucket.append(np.mean([label_entropy(data.labels[s], 10)
                                       for s in result.shards]))
        assert np.mean(skewed) < 0.5 * np.mean(iid)

    def test_empty_nodes_are_repaired(self):
        """Tiny data with extreme skew still gives every node a sample."""
        data = generate_dataset(2, 2, 12, seed=0)
        spec = PartitionSpec(PartitionKind.DIRICHLET, 0.01)
        for seed in range(10):
            result = partition(data, 6, spec, seed=seed)
            assert min(result.sizes()) >= 1
            assert sum(result.sizes()) == 12

    def test_invalid_arguments(self):
        data = generate_dataset(2, 2, 4, seed=0)
        with pytest.raises(InvalidArgs):
            partition(data, 1, IID, seed=0)
        with pytest.raises(InvalidArgs):
            partition(data, 5, IID, seed=0)
        with pytest.raises(InvalidArgs):
            partition(data, 2, PartitionSpec(PartitionKind.DIRICHLET, 0.0), seed=0)


class TestModelParams:
    """Test the flat parameter container."""

    def test_shapes_and_count(self):
        shapes = mlp_shapes(2, [4], 2)
        assert shapes == ((2, 4), (4, 2))
        assert param_count(shapes) == 22

    def test_wrong_length(self):
        with pytest.raises(InvalidArgs) as exc:
            ModelParams(((2, 2),), np.zeros(5))
        assert exc.value.error_code == "L003"

    def test_non_finite(self):
        with pytest.raises(NumericError):
            ModelParams(((1, 1),), np.array([np.nan, 0.0]))

    def test_values_are_read_only_copies(self):
        source = np.zeros(6)
        params = ModelParams(((2, 2),), source)
        source[0] = 1.0
        assert params.values[0] == 0.0
        with pytest.raises(ValueError):
            params.values[0] = 2.0


class TestForward:
    """Test the softmax output layer."""

    @pytest.mark.parametrize("scale", [0.1, 10.0, 1e3])
    def test_rows_are_distributions(self, scale):
        rng = np.random.default_rng(11)
        shapes = mlp_shapes(8, [16], 4)
        values = rng.normal(0.0, scale, param_count(shapes))
        probs = forward(values, shapes, rng.normal(0.0, 5.0, (64, 8)))
        assert probs.shape == (64, 4)
        assert np.all(probs >= 0.0)
        assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-6)

    def test_linear_model(self):
        shapes = mlp_shapes(3, [], 2)
        probs = forward(np.zeros(param_count(shapes)), shapes, np.ones((5, 3)))
        assert np.allclose(probs, 0.5)


class TestGradients:
    """Analytic gradients against central finite differences."""

    @pytest.mark.parametrize("seed", range(5))
    def test_tiny_model_gradients(self, seed):
        rng = np.random.default_rng(seed)
        shapes = mlp_shapes(2, [4], 2)
        values = rng.uniform(-0.5, 0.5, param_count(shapes))
        x = rng.standard_normal((1, 2))
        y = np.array([seed % 2])

        _, analytic = loss_and_gradients(values, shapes, x, y)
        eps = 1e-6
        numeric = np.empty_like(values)
        for i in range(values.size):
            plus, minus = values.copy(), values.copy()
            plus[i] += eps
            minus[i] -= eps
            numeric[i] = (loss_and_gradients(plus, shapes, x, y)[0]
                          - loss_and_gradients(minus, shapes, x, y)[0]) / (2 * eps)

        scale = np.maximum(np.abs(analytic) + np.abs(numeric), 1e-8)
        relative = np.abs(analytic - numeric) / scale
        assert np.all((relative < 1e-3) | (np.abs(analytic - numeric) < 1e-9))


class TestTrainLocal:
    """Test local SGD."""

    def test_zero_epochs_is_identity(self):
        params = init_params(mlp_shapes(2, [4], 2), seed=0)
        outcome = train_local(params, separated_blobs(20), epochs=0, lr=0.05, seed=0)
        assert outcome.params == params
        assert outcome.samples_processed == 0

    def test_samples_processed(self):
        params = init_params(mlp_shapes(2, [], 2), seed=0)
        outcome = train_local(params, separated_blobs(50), epochs=3, lr=0.05, seed=0)
        assert outcome.samples_processed == 150

    def test_deterministic(self):
        params = init_params(mlp_shapes(2, [4], 2), seed=1)
        data = separated_blobs(64)
        first = train_local(params, data, epochs=2, lr=0.05, seed=9)
        second = train_local(params, data, epochs=2, lr=0.05, seed=9)
        assert first.params == second.params

    def test_blob_task_reaches_high_accuracy(self):
        data = separated_blobs(200, seed=3)
        params = init_params(mlp_shapes(2, [], 2), seed=3)
        outcome = train_local(params, data, epochs=50, lr=0.05, seed=3)
        assert evaluate(outcome.params, data).accuracy >= 0.95

    def test_invalid_arguments(self):
        params = init_params(mlp_shapes(2, [], 2), seed=0)
        data = separated_blobs(10)
        with pytest.raises(InvalidArgs):
            train_local(params, data.subset([]), epochs=1, lr=0.05, seed=0)
        with pytest.raises(InvalidArgs):
            train_local(params, data, epochs=1, lr=0.0, seed=0)
        with pytest.raises(InvalidArgs):
            train_local(params, data, epochs=-1, lr=0.05, seed=0)

    def test_divergence_is_reported(self):
        params = init_params(mlp_shapes(2, [], 2), seed=0)
        blobs = separated_blobs(64)
        data = Dataset(blobs.features * 1e3, blobs.labels, 2)
        with pytest.raises(NumericError) as exc:
            train_local(params, data, epochs=2, lr=1e300, seed=0)
        assert exc.value.error_code == "L004"


class TestEvaluate:
    """Test macro-F1 evaluation."""

    def test_perfect_predictions(self):
        labels = np.array([0, 1, 2, 1])
        assert macro_f1_score(labels, labels, 3) == 1.0

    def test_absent_class_counts_as_zero(self):
        labels = np.zeros(5, dtype=np.int64)
        assert macro_f1_score(labels, labels, 2) == 0.5

    def test_random_params_near_chance(self):
        """Untrained models on balanced 2-class data average about 0.5."""
        scores = []
        for seed in range(50):
            data = separated_blobs(100, seed=seed)
            params = init_params(mlp_shapes(2, [8], 2), seed=seed)
            scores.append(evaluate(params, data).macro_f1)
        assert 0.3 <= np.mean(scores) <= 0.7

    def test_empty_data(self):
        params = init_params(mlp_shapes(2, [], 2), seed=0)
        with pytest.raises(InvalidArgs) as exc:
            evaluate(params, separated_blobs(10).subset([]))
        assert exc.value.error_code == "L006"


class TestCodec:
    """Test the model wire format."""

    def test_length_of_2_4_2_model(self):
        model = init_params(mlp_shapes(2, [4], 2), seed=0)
        payload = serialize_model(model)
        assert len(payload) == 120
        assert serialized_length(model) == 120
        assert payload[:4] == b"GDFL"

    def test_decode_restores_model(self):
        model = init_params(mlp_shapes(8, [16], 4), seed=7)
        assert deserialize_model(serialize_model(model)) == model

    def test_deterministic_bytes(self):
        model = init_params(mlp_shapes(3, [5], 2), seed=2)
        assert serialize_model(model) == serialize_model(model)

    def test_bad_magic(self):
        payload = bytearray(serialize_model(init_params(mlp_shapes(2, [4], 2), seed=0)))
        payload[:4] = b"XXXX"
        with pytest.raises(BadMagic):
            deserialize_model(bytes(payload))

    def test_version_mismatch(self):
        payload = bytearray(serialize_model(init_params(mlp_shapes(2, [4], 2), seed=0)))
        payload[4] = 9
        with pytest.raises(VersionMismatch):
            deserialize_model(bytes(payload))

    @pytest.mark.parametrize("cut", [3, 10, 119])
    def test_truncated(self, cut):
        payload = serialize_model(init_params(mlp_shapes(2, [4], 2), seed=0))
        with pytest.raises(LengthMismatch):
            deserialize_model(payload[:cut])

    def test_trailing_bytes(self):
        payload = serialize_model(init_params(mlp_shapes(2, [4], 2), seed=0))
        with pytest.raises(LengthMismatch):
            deserialize_model(payload + b"\0")
