"""
Labeled examples and datasets.

Datasets are stored column-wise (feature matrix + label vector) and are
read-only after construction, so they can be shared across worker threads.
"""

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .predicates import PropertyPredicate


class DistributionError(ValueError):
    """Invalid distribution, dataset or sampling request."""


class EmptyDatasetError(DistributionError):
    """An operation needs at least one example."""


@dataclass(frozen=True)
class LabeledExample:
    """One (x, y) pair."""
    x: np.ndarray
    y: int


class Dataset:
    """Immutable collection of labeled examples with a fixed dimensionality."""

    def __init__(self, features: np.ndarray, labels: np.ndarray, dim: Optional[int] = None):
        features = np.array(features, dtype=float)
        labels = np.array(labels, dtype=np.int64).reshape(-1)
        if features.size == 0:
            width = dim if dim is not None else (features.shape[1] if features.ndim == 2 else 0)
            features = features.reshape(0, width)
        if features.ndim != 2:
            raise DistributionError(f"features must be 2-D, got shape {features.shape}")
        if features.shape[0] != labels.shape[0]:
            raise DistributionError(
                f"{features.shape[0]} feature rows but {labels.shape[0]} labels")
        if not np.all(np.isfinite(features)):
            raise DistributionError("features must be finite")
        if labels.size and not np.all((labels == 0) | (labels == 1)):
            raise DistributionError("labels must be 0 or 1")
        features.setflags(write=False)
        labels.setflags(write=False)
        self._features = features
        self._labels = labels

    @property
    def features(self) -> np.ndarray:
        return self._features

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def dim(self) -> int:
        return self._features.shape[1]

    def __len__(self) -> int:
        return self._labels.shape[0]

    def __iter__(self) -> Iterator[LabeledExample]:
        for x, y in zip(self._features, self._labels):
            yield LabeledExample(x, int(y))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self._features.shape == other._features.shape
                and np.array_equal(self._features, other._features)
                and np.array_equal(self._labels, other._labels))

    def __repr__(self) -> str:
        return f"Dataset(n={len(self)}, dim={self.dim})"

    def relabel(self, label: int) -> "Dataset":
        """Same features, every label set to `label`."""
        return Dataset(self._features, np.full(len(self), int(label)), dim=self.dim)

    def subset(self, indices: Sequence[int]) -> "Dataset":
        idx = np.asarray(indices, dtype=np.int64)
        return Dataset(self._features[idx], self._labels[idx], dim=self.dim)

    @staticmethod
    def concat(*parts: "Dataset") -> "Dataset":
        """Union of datasets (order preserved)."""
        parts = [p for p in parts if p is not None]
        if not parts:
            raise EmptyDatasetError("nothing to concatenate")
        dims = {p.dim for p in parts}
        if len(dims) != 1:
            raise DistributionError(f"cannot concatenate datasets of dims {sorted(dims)}")
        return Dataset(np.vstack([p.features for p in parts]),
                       np.concatenate([p.labels for p in parts]),
                       dim=parts[0].dim)


def property_rate(data: Dataset, f: PropertyPredicate) -> float:
    """Exact fraction of examples with f(x) = 1."""
    if len(data) == 0:
        raise EmptyDatasetError("property rate of an empty dataset is undefined")
    return float(np.mean(f.evaluate_many(data.features)))
