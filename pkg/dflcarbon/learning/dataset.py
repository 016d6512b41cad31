"""Synthetic Gaussian-blob classification data."""

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np

from dflcarbon.core.exceptions import InvalidArgs

BLOB_SIGMA = 0.7
MEAN_RANGE = 3.0


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix plus integer class labels in 0..classes-1."""
    features: np.ndarray
    labels: np.ndarray
    classes: int

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def num_features(self) -> int:
        return int(self.features.shape[1])

    def subset(self, indices: Sequence[int]) -> "Dataset":
        """Read-only view of the given rows."""
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self.features[idx], self.labels[idx], self.classes)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.classes)


def class_sample_counts(classes: int, total_samples: int) -> Tuple[int, ...]:
    """Even split across classes with the remainder going to the lowest indices."""
    base, remainder = divmod(total_samples, classes)
    return tuple(base + (1 if c < remainder else 0) for c in range(classes))


def generate_dataset(classes: int, features: int, total_samples: int, seed: int) -> Dataset:
    """Draw isotropic Gaussian blobs, one per class.

    Each class mean is uniform in [-3, 3]^d and every sample adds N(0, 0.7^2)
    noise per feature. Rows are grouped by class.

    Raises:
        InvalidArgs: If classes < 2, features < 1 or total_samples < classes
    """
    if classes < 2:
        raise InvalidArgs(f"Need at least 2 classes, got {classes}", error_code="L001")
    if features < 1:
        raise InvalidArgs(f"Need at least 1 feature, got {features}", error_code="L001")
    if total_samples < classes:
        raise InvalidArgs(
            f"Need at least one sample per class ({classes}), got {total_samples}",
            error_code="L001")

    rng = np.random.default_rng(seed)
    means = rng.uniform(-MEAN_RANGE, MEAN_RANGE, size=(classes, features))
    blocks, labels = [], []
    for c, count in enumerate(class_sample_counts(classes, total_samples)):
        blocks.append(means[c] + BLOB_SIGMA * rng.standard_normal((count, features)))
        labels.append(np.full(count, c, dtype=np.int64))
    return Dataset(np.vstack(blocks), np.concatenate(labels), classes)


def train_test_split(data: Dataset, test_samples: int, seed: int) -> Tuple[Dataset, Dataset]:
    """Shuffle once and cut the first `test_samples` rows off as the test split."""
    if not 0 < test_samples < len(data):
        raise InvalidArgs(
            f"Test split must hold between 1 and {len(data) - 1} samples, got {test_samples}",
            error_code="L001")
    order = np.random.default_rng(seed).permutation(len(data))
    return data.subset(order[test_samples:]), data.subset(order[:test_samples])


def save_dataset_csv(data: Dataset, path: Union[str, Path]) -> None:
    """Dump features and labels as CSV (one row per sample, label last)."""
    header = ",".join([f"x{i}" for i in range(data.num_features)] + ["label"])
    table = np.column_stack([data.features, data.labels.astype(np.float64)])
    fmt = ["%.17g"] * data.num_features + ["%d"]
    np.savetxt(path, table, delimiter=",", header=header, comments="", fmt=fmt,
               encoding="utf-8")


def load_dataset_csv(path: Union[str, Path], classes: int) -> Dataset:
    """Read a CSV written by save_dataset_csv."""
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2, encoding="utf-8")
    return Dataset(table[:, :-1].copy(), table[:, -1].astype(np.int64), classes)
